/** Dashboard wiring: state lives in the URL, data comes only from the API,
 * and overlapping requests resolve last-write-wins. */

import { ApiClient, LatestOnly } from "./api.js";
import { renderChart } from "./chart.js";
import { debounce } from "./debounce.js";
import type { BreakoutItem } from "./types.js";
import {
  DEFAULT_STATE,
  MAX_WINDOW,
  MIN_WINDOW,
  parseState,
  serializeState,
  type DashboardState,
} from "./urlState.js";
import {
  breakoutDetailHtml,
  breakoutListHtml,
  searchPagerText,
  searchResultsHtml,
} from "./views.js";

const SEARCH_PAGE_SIZE = 20;
const REFETCH_DEBOUNCE_MS = 300;

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
}

class Dashboard {
  private state: DashboardState = { ...DEFAULT_STATE };
  private breakouts: BreakoutItem[] = [];
  private readonly api = new ApiClient();
  private readonly latest = new LatestOnly();

  private readonly airlineSelect = byId<HTMLSelectElement>("airline");
  private readonly windowSlider = byId<HTMLInputElement>("window");
  private readonly windowValue = byId<HTMLSpanElement>("window-value");
  private readonly kInput = byId<HTMLInputElement>("k");
  private readonly fromInput = byId<HTMLInputElement>("from");
  private readonly toInput = byId<HTMLInputElement>("to");
  private readonly canvas = byId<HTMLCanvasElement>("chart");
  private readonly breakoutList = byId<HTMLDivElement>("breakouts");
  private readonly breakoutDetail = byId<HTMLDivElement>("breakout-detail");
  private readonly searchForm = byId<HTMLFormElement>("search-form");
  private readonly searchInput = byId<HTMLInputElement>("search-q");
  private readonly searchResults = byId<HTMLDivElement>("search-results");
  private readonly searchPager = byId<HTMLSpanElement>("search-pager");
  private readonly prevButton = byId<HTMLButtonElement>("search-prev");
  private readonly nextButton = byId<HTMLButtonElement>("search-next");
  private readonly status = byId<HTMLSpanElement>("status");

  private readonly refetchSoon = debounce(() => {
    void this.refetchAnalytics();
  }, REFETCH_DEBOUNCE_MS);

  async start(): Promise<void> {
    this.windowSlider.min = String(MIN_WINDOW);
    this.windowSlider.max = String(MAX_WINDOW);
    this.state = parseState(window.location.search);

    const airlines = await this.api.getAirlines();
    for (const entry of airlines.airlines) {
      const option = document.createElement("option");
      option.value = entry.airline;
      option.textContent = `${entry.airline} (${entry.n_records})`;
      this.airlineSelect.appendChild(option);
    }
    const known = airlines.airlines.map((a) => a.airline);
    if (!known.includes(this.state.airline)) {
      this.state.airline = known[0] ?? "";
    }

    this.bindEvents();
    this.syncControls();
    await this.refetchAnalytics();
    if (this.state.q) await this.runSearch();
  }

  private bindEvents(): void {
    this.airlineSelect.addEventListener("change", () => {
      this.update({ airline: this.airlineSelect.value, breakout: null, cursor: 0 });
      void this.refetchAnalytics();
      if (this.state.q) void this.runSearch();
    });
    this.windowSlider.addEventListener("input", () => {
      this.update({ window: Number(this.windowSlider.value), breakout: null });
      this.windowValue.textContent = this.windowSlider.value;
      this.refetchSoon();
    });
    this.kInput.addEventListener("change", () => {
      const k = Number(this.kInput.value);
      if (Number.isFinite(k) && k > 0) {
        this.update({ k, breakout: null });
        this.refetchSoon();
      }
    });
    for (const input of [this.fromInput, this.toInput]) {
      input.addEventListener("change", () => {
        this.update({
          from: this.fromInput.value || null,
          to: this.toInput.value || null,
          breakout: null,
          cursor: 0,
        });
        this.refetchSoon();
      });
    }
    this.breakoutList.addEventListener("click", (event) => {
      const target = event.target as HTMLElement;
      const date = target.closest("button")?.dataset.breakout;
      if (date) {
        this.update({ breakout: date });
        this.renderBreakouts();
      }
    });
    this.searchForm.addEventListener("submit", (event) => {
      event.preventDefault();
      this.update({ q: this.searchInput.value.trim(), cursor: 0 });
      void this.runSearch();
    });
    this.prevButton.addEventListener("click", () => {
      this.update({ cursor: Math.max(0, this.state.cursor - SEARCH_PAGE_SIZE) });
      void this.runSearch();
    });
    this.nextButton.addEventListener("click", () => {
      this.update({ cursor: this.state.cursor + SEARCH_PAGE_SIZE });
      void this.runSearch();
    });
    window.addEventListener("popstate", () => {
      this.state = parseState(window.location.search);
      this.syncControls();
      void this.refetchAnalytics();
      if (this.state.q) void this.runSearch();
    });
  }

  private update(patch: Partial<DashboardState>): void {
    this.state = { ...this.state, ...patch };
    const qs = serializeState(this.state);
    window.history.replaceState(null, "", qs || window.location.pathname);
  }

  private syncControls(): void {
    this.airlineSelect.value = this.state.airline;
    this.windowSlider.value = String(this.state.window);
    this.windowValue.textContent = String(this.state.window);
    this.kInput.value = String(this.state.k);
    this.fromInput.value = this.state.from ?? "";
    this.toInput.value = this.state.to ?? "";
    this.searchInput.value = this.state.q;
  }

  private params() {
    return {
      window: this.state.window,
      k: this.state.k,
      from: this.state.from,
      to: this.state.to,
    };
  }

  private async refetchAnalytics(): Promise<void> {
    if (!this.state.airline) return;
    this.status.textContent = "loading…";
    try {
      const result = await this.latest.run("analytics", async () => {
        const [series, breakouts] = await Promise.all([
          this.api.getSeries(this.state.airline, this.params()),
          this.api.getBreakouts(this.state.airline, this.params()),
        ]);
        return { series, breakouts };
      });
      if (result === null) return; // a newer request superseded this one
      renderChart(this.canvas, result.series);
      this.breakouts = result.breakouts.breakouts;
      if (
        this.state.breakout &&
        !this.breakouts.some((b) => b.date === this.state.breakout)
      ) {
        this.update({ breakout: null });
      }
      this.renderBreakouts();
      this.status.textContent = `${result.series.dates.length} days, ${this.breakouts.length} breakout(s)`;
    } catch (error) {
      this.status.textContent = `error: ${String(error)}`;
    }
  }

  private renderBreakouts(): void {
    this.breakoutList.innerHTML = breakoutListHtml(
      this.breakouts,
      this.state.breakout,
    );
    const selected = this.breakouts.find((b) => b.date === this.state.breakout);
    this.breakoutDetail.innerHTML = selected
      ? breakoutDetailHtml(selected)
      : '<p class="empty">Select a breakout to see its top words.</p>';
  }

  private async runSearch(): Promise<void> {
    if (!this.state.airline || !this.state.q) {
      this.searchResults.innerHTML = "";
      this.searchPager.textContent = "";
      return;
    }
    try {
      const response = await this.latest.run("search", () =>
        this.api.search(this.state.airline, {
          q: this.state.q,
          from: this.state.from,
          to: this.state.to,
          cursor: this.state.cursor,
          pageSize: SEARCH_PAGE_SIZE,
        }),
      );
      if (response === null) return;
      this.searchResults.innerHTML = searchResultsHtml(response);
      this.searchPager.textContent = searchPagerText(response, this.state.cursor);
      this.prevButton.disabled = this.state.cursor === 0;
      this.nextButton.disabled = response.next_cursor === null;
    } catch (error) {
      this.searchResults.innerHTML = `<p class="empty">error: ${String(error)}</p>`;
    }
  }
}

void new Dashboard().start();
