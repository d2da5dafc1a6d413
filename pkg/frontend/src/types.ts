/** Response shapes of the analytics HTTP API (schema_version 1). */

export interface AirlineSummary {
  airline: string;
  n_records: number;
  first_date: string | null;
  last_date: string | null;
}

export interface AirlinesResponse {
  schema_version: number;
  airlines: AirlineSummary[];
}

export interface SeriesResponse {
  schema_version: number;
  airline: string;
  window: number;
  k: number;
  from: string;
  to: string;
  dates: string[];
  n_tweets: number[];
  n_positive: number[];
  n_negative: number[];
  raw_score: number[];
  z: number[];
  sma: (number | null)[];
  upper: (number | null)[];
  lower: (number | null)[];
  breakout_direction: (string | null)[];
}

export interface BreakoutItem {
  date: string;
  direction: string;
  z: number;
  band: number;
  gap: number;
  run_start: string;
  run_end: string;
  /** [word, frequency] pairs, already ranked by the server. */
  top_words: [string, number][];
}

export interface BreakoutsResponse {
  schema_version: number;
  airline: string;
  window: number;
  k: number;
  from: string;
  to: string;
  breakouts: BreakoutItem[];
}

export interface SearchItem {
  tweet_id: string;
  created_at: string;
  text: string;
  p_positive: number | null;
  p_negative: number | null;
}

export interface SearchResponse {
  schema_version: number;
  airline: string;
  q: string;
  total: number;
  next_cursor: number | null;
  items: SearchItem[];
}
