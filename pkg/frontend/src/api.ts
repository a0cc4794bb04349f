// Service client. Briefing-style requests run through LatestOnly so a new
// selection aborts the one still in flight.

import type { Bbox, Briefing, CellsResponse, DatasetsResponse, QueryResults } from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
  }
}

async function asJson<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = (await response.json()) as { error?: string };
      if (body.error) detail = body.error;
    } catch {
      // keep statusText
    }
    throw new ApiError(response.status, detail);
  }
  return (await response.json()) as T;
}

export class ApiClient {
  constructor(
    private readonly base: string,
    private readonly fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private url(path: string, params: Record<string, string | number | undefined>): string {
    const q = Object.entries(params)
      .filter(([, v]) => v !== undefined)
      .map(([k, v]) => `${encodeURIComponent(k)}=${encodeURIComponent(String(v))}`)
      .join("&");
    return `${this.base}${path}${q ? "?" + q : ""}`;
  }

  getCells(bbox: Bbox, level: number, signal?: AbortSignal): Promise<CellsResponse> {
    return this.fetchImpl(this.url("/cells", { bbox: bbox.join(","), level }), {
      signal,
    }).then((r) => asJson<CellsResponse>(r));
  }

  getBriefing(
    target: { cell?: string; region?: string },
    window?: [string, string] | null,
    signal?: AbortSignal,
  ): Promise<Briefing> {
    return this.fetchImpl(
      this.url("/briefing", {
        cell: target.cell,
        region: target.region,
        from: window?.[0],
        to: window?.[1],
      }),
      { signal },
    ).then((r) => asJson<Briefing>(r));
  }

  getCompare(a: string, b: string, signal?: AbortSignal): Promise<Briefing> {
    return this.fetchImpl(this.url("/compare", { a, b }), { signal }).then((r) =>
      asJson<Briefing>(r),
    );
  }

  getDatasets(): Promise<DatasetsResponse> {
    return this.fetchImpl(this.url("/datasets", {})).then((r) =>
      asJson<DatasetsResponse>(r),
    );
  }

  postQuery(text: string): Promise<QueryResults> {
    return this.fetchImpl(`${this.base}/query`, {
      method: "POST",
      headers: { "content-type": "text/plain" },
      body: text,
    }).then((r) => asJson<QueryResults>(r));
  }
}

/** Runs at most one request at a time; starting a new one aborts the
 * previous. Aborted runs resolve to null. */
export class LatestOnly {
  private controller: AbortController | null = null;

  async run<T>(task: (signal: AbortSignal) => Promise<T>): Promise<T | null> {
    this.controller?.abort();
    const controller = new AbortController();
    this.controller = controller;
    try {
      return await task(controller.signal);
    } catch (err) {
      if (controller.signal.aborted) return null;
      throw err;
    } finally {
      if (this.controller === controller) this.controller = null;
    }
  }

  cancel(): void {
    this.controller?.abort();
    this.controller = null;
  }
}
