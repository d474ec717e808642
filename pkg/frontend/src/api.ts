// Thin client for the recommendation service. The fetch implementation is
// injectable so tests can stub the wire.

import type { EvidenceDetail, RecommendPayload } from "./types";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ServiceError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
  }
}

export class ServiceClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  async recommend(query: string, k: number): Promise<RecommendPayload> {
    const resp = await this.fetchImpl(`${this.baseUrl}/recommend`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ query, k }),
    });
    if (!resp.ok) {
      throw new ServiceError(resp.status, await describeError(resp));
    }
    return (await resp.json()) as RecommendPayload;
  }

  async evidence(spanId: number): Promise<EvidenceDetail> {
    const resp = await this.fetchImpl(`${this.baseUrl}/evidence/${spanId}`);
    if (!resp.ok) {
      throw new ServiceError(resp.status, await describeError(resp));
    }
    return (await resp.json()) as EvidenceDetail;
  }
}

async function describeError(resp: Response): Promise<string> {
  try {
    const body = await resp.json();
    if (body && typeof body.error === "string") return body.error;
  } catch {
    // fall through to the generic message
  }
  return `service responded with status ${resp.status}`;
}
