import { describe, expect, it } from "vitest";
import { ApiClient, ApiError, LatestOnly, type FetchLike } from "../src/api.js";

function fakeFetch(
  handler: (url: string) => unknown,
): { fetchFn: FetchLike; urls: string[] } {
  const urls: string[] = [];
  const fetchFn: FetchLike = async (url) => {
    urls.push(url);
    return { ok: true, status: 200, json: async () => handler(url) };
  };
  return { fetchFn, urls };
}

describe("ApiClient", () => {
  it("builds series URLs with only the provided params", async () => {
    const { fetchFn, urls } = fakeFetch(() => ({}));
    const api = new ApiClient("", fetchFn);
    await api.getSeries("united", { window: 7, from: null, to: undefined });
    await api.getSeries("delta", { window: 14, k: 2.5, from: "2022-03-01" });
    expect(urls).toEqual([
      "/api/series/united?window=7",
      "/api/series/delta?window=14&k=2.5&from=2022-03-01",
    ]);
  });

  it("encodes the search query and pagination", async () => {
    const { fetchFn, urls } = fakeFetch(() => ({}));
    const api = new ApiClient("http://x", fetchFn);
    await api.search("united", { q: "lost & found", cursor: 20, pageSize: 10 });
    expect(urls).toEqual([
      "http://x/api/search/united?q=lost+%26+found&cursor=20&page_size=10",
    ]);
  });

  it("returns the server payload verbatim", async () => {
    const payload = {
      breakouts: [
        { date: "2022-04-10", top_words: [["meltdowngate", 60], ["chaos", 30]] },
      ],
    };
    const { fetchFn } = fakeFetch(() => payload);
    const api = new ApiClient("", fetchFn);
    const body = await api.getBreakouts("united");
    // the drill-down table must show exactly the server's ranking
    expect(body).toEqual(payload);
  });

  it("throws ApiError on non-2xx responses", async () => {
    const fetchFn: FetchLike = async () => ({
      ok: false,
      status: 404,
      json: async () => ({}),
    });
    const api = new ApiClient("", fetchFn);
    await expect(api.getSeries("concorde")).rejects.toBeInstanceOf(ApiError);
    await expect(api.getSeries("concorde")).rejects.toMatchObject({
      status: 404,
    });
  });
});

describe("LatestOnly", () => {
  it("drops results of superseded requests (last write wins)", async () => {
    const latest = new LatestOnly();
    let releaseSlow!: (v: string) => void;
    const slow = latest.run(
      "c",
      () => new Promise<string>((resolve) => (releaseSlow = resolve)),
    );
    const fast = latest.run("c", async () => "fresh");
    await expect(fast).resolves.toBe("fresh");
    releaseSlow("stale");
    await expect(slow).resolves.toBeNull();
  });

  it("delivers results when requests do not overlap", async () => {
    const latest = new LatestOnly();
    await expect(latest.run("c", async () => 1)).resolves.toBe(1);
    await expect(latest.run("c", async () => 2)).resolves.toBe(2);
  });

  it("tracks channels independently", async () => {
    const latest = new LatestOnly();
    let releaseA!: (v: string) => void;
    const a = latest.run(
      "a",
      () => new Promise<string>((resolve) => (releaseA = resolve)),
    );
    await expect(latest.run("b", async () => "b1")).resolves.toBe("b1");
    releaseA("a1");
    await expect(a).resolves.toBe("a1"); // not superseded by channel b
  });

  it("swallows errors from stale requests but surfaces fresh ones", async () => {
    const latest = new LatestOnly();
    let rejectSlow!: (e: Error) => void;
    const slow = latest.run(
      "c",
      () => new Promise<string>((_, reject) => (rejectSlow = reject)),
    );
    await expect(latest.run("c", async () => "ok")).resolves.toBe("ok");
    rejectSlow(new Error("boom"));
    await expect(slow).resolves.toBeNull();
    await expect(
      latest.run("c", async () => {
        throw new Error("fresh failure");
      }),
    ).rejects.toThrow("fresh failure");
  });
});
