/** Dashboard view state, round-trippable through the URL query string so
 * every view is a shareable link. Pure string-in/string-out functions; the
 * history wiring lives in main.ts. */

export interface DashboardState {
  airline: string;
  window: number;
  k: number;
  from: string | null;
  to: string | null;
  q: string;
  cursor: number;
  /** ISO date of the breakout opened in the drill-down panel. */
  breakout: string | null;
}

export const MIN_WINDOW = 2;
export const MAX_WINDOW = 60;

export const DEFAULT_STATE: DashboardState = {
  airline: "",
  window: 14,
  k: 2.0,
  from: null,
  to: null,
  q: "",
  cursor: 0,
  breakout: null,
};

const ISO_DATE = /^\d{4}-\d{2}-\d{2}$/;

function clampWindow(value: number): number {
  if (!Number.isFinite(value)) return DEFAULT_STATE.window;
  return Math.min(MAX_WINDOW, Math.max(MIN_WINDOW, Math.round(value)));
}

function parseDate(value: string | null): string | null {
  return value !== null && ISO_DATE.test(value) ? value : null;
}

/** Parses a query string ("?a=1" or "a=1"); invalid or missing fields fall
 * back to defaults, so any URL yields a usable state. */
export function parseState(search: string): DashboardState {
  const params = new URLSearchParams(
    search.startsWith("?") ? search.slice(1) : search,
  );
  const windowRaw = Number(params.get("window") ?? DEFAULT_STATE.window);
  const kRaw = Number(params.get("k") ?? DEFAULT_STATE.k);
  const cursorRaw = Number(params.get("cursor") ?? 0);
  return {
    airline: params.get("airline") ?? DEFAULT_STATE.airline,
    window: clampWindow(windowRaw),
    k: Number.isFinite(kRaw) && kRaw > 0 ? kRaw : DEFAULT_STATE.k,
    from: parseDate(params.get("from")),
    to: parseDate(params.get("to")),
    q: params.get("q") ?? "",
    cursor: Number.isInteger(cursorRaw) && cursorRaw >= 0 ? cursorRaw : 0,
    breakout: parseDate(params.get("breakout")),
  };
}

/** Serializes state, omitting defaults so clean views give clean URLs. */
export function serializeState(state: DashboardState): string {
  const params = new URLSearchParams();
  if (state.airline) params.set("airline", state.airline);
  if (state.window !== DEFAULT_STATE.window) {
    params.set("window", String(state.window));
  }
  if (state.k !== DEFAULT_STATE.k) params.set("k", String(state.k));
  if (state.from) params.set("from", state.from);
  if (state.to) params.set("to", state.to);
  if (state.q) params.set("q", state.q);
  if (state.cursor > 0) params.set("cursor", String(state.cursor));
  if (state.breakout) params.set("breakout", state.breakout);
  const qs = params.toString();
  return qs ? `?${qs}` : "";
}
