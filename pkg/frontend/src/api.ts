/** Typed client for the matsel service. The UI never computes scores
 * itself; everything numeric comes back from these calls. */

import type {
  ClassifyResponse,
  CompareRequestBody,
  CompareResponse,
  RequirementEntry,
  SchemaResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: string,
  ) {
    super(`service answered ${status}: ${detail}`);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private baseUrl: string,
    private fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
  }

  async schema(signal?: AbortSignal): Promise<SchemaResponse> {
    return this.request("GET", "/api/schema", undefined, signal);
  }

  async classify(
    requirement: RequirementEntry[],
    signal?: AbortSignal,
  ): Promise<ClassifyResponse> {
    return this.request("POST", "/api/classify", { requirement }, signal);
  }

  async compare(
    body: CompareRequestBody,
    signal?: AbortSignal,
  ): Promise<CompareResponse> {
    return this.request("POST", "/api/compare", body, signal);
  }

  private async request<T>(
    method: "GET" | "POST",
    path: string,
    body?: unknown,
    signal?: AbortSignal,
  ): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path, {
      method,
      signal,
      headers: body === undefined ? undefined : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await response.json().catch(() => ({}));
    if (!response.ok) {
      const detail =
        typeof payload?.detail === "string"
          ? payload.detail
          : JSON.stringify(payload?.detail ?? payload);
      throw new ApiError(response.status, detail);
    }
    return payload as T;
  }
}
