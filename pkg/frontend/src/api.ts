/** Typed client for the analytics API. All numbers are rendered exactly as
 * the server sent them — no client-side recomputation of analytics. */

import type {
  AirlinesResponse,
  BreakoutsResponse,
  SearchResponse,
  SeriesResponse,
} from "./types.js";

export type FetchLike = (url: string) => Promise<{
  ok: boolean;
  status: number;
  json(): Promise<unknown>;
}>;

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    message: string,
  ) {
    super(message);
  }
}

export interface SeriesParams {
  window?: number;
  k?: number;
  from?: string | null;
  to?: string | null;
}

export interface SearchParams extends Pick<SeriesParams, "from" | "to"> {
  q: string;
  cursor?: number;
  pageSize?: number;
}

function query(params: Record<string, string | number | null | undefined>): string {
  const usp = new URLSearchParams();
  for (const [key, value] of Object.entries(params)) {
    if (value !== null && value !== undefined && value !== "") {
      usp.set(key, String(value));
    }
  }
  const qs = usp.toString();
  return qs ? `?${qs}` : "";
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (url) => fetch(url),
  ) {}

  private async get<T>(path: string): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`);
    if (!response.ok) {
      throw new ApiError(response.status, `${path}: HTTP ${response.status}`);
    }
    return (await response.json()) as T;
  }

  getAirlines(): Promise<AirlinesResponse> {
    return this.get("/api/airlines");
  }

  getSeries(airline: string, params: SeriesParams = {}): Promise<SeriesResponse> {
    const qs = query({
      window: params.window,
      k: params.k,
      from: params.from,
      to: params.to,
    });
    return this.get(`/api/series/${encodeURIComponent(airline)}${qs}`);
  }

  getBreakouts(airline: string, params: SeriesParams = {}): Promise<BreakoutsResponse> {
    const qs = query({
      window: params.window,
      k: params.k,
      from: params.from,
      to: params.to,
    });
    return this.get(`/api/breakouts/${encodeURIComponent(airline)}${qs}`);
  }

  search(airline: string, params: SearchParams): Promise<SearchResponse> {
    const qs = query({
      q: params.q,
      from: params.from,
      to: params.to,
      cursor: params.cursor,
      page_size: params.pageSize,
    });
    return this.get(`/api/search/${encodeURIComponent(airline)}${qs}`);
  }
}

/** Serializes overlapping async requests per channel: a result is delivered
 * only if no newer request was started on the same channel afterwards, so a
 * slow stale response can never overwrite a fresh one (last write wins). */
export class LatestOnly {
  private readonly tickets = new Map<string, number>();

  async run<T>(channel: string, task: () => Promise<T>): Promise<T | null> {
    const ticket = (this.tickets.get(channel) ?? 0) + 1;
    this.tickets.set(channel, ticket);
    let result: T;
    try {
      result = await task();
    } catch (error) {
      if (this.tickets.get(channel) !== ticket) return null; // stale failure
      throw error;
    }
    return this.tickets.get(channel) === ticket ? result : null;
  }
}
