import type {
  AgreementPayload,
  AuditPayload,
  CreateSessionRequest,
  Health,
  NextPair,
  ResultsPayload,
  SessionCreated,
  SubmitJudgementRequest,
  SubmitJudgementResponse,
} from "./types.js";

export interface ClientOptions {
  baseUrl: string;
  token?: string;
  /** Network-failure retries per request; HTTP error statuses are not retried. */
  retries?: number;
  backoffMs?: number;
  fetchImpl?: typeof fetch;
}

/** Error body shape the service returns for every non-2xx response. */
export class ApiError extends Error {
  readonly status: number;
  readonly errorType: string;

  constructor(status: number, errorType: string, detail: string) {
    super(detail);
    this.name = "ApiError";
    this.status = status;
    this.errorType = errorType;
  }
}

const sleep = (ms: number) => new Promise((resolve) => setTimeout(resolve, ms));

export class ApiClient {
  private readonly baseUrl: string;
  private readonly token?: string;
  private readonly retries: number;
  private readonly backoffMs: number;
  private readonly fetchImpl: typeof fetch;

  constructor(options: ClientOptions) {
    this.baseUrl = options.baseUrl.replace(/\/+$/, "");
    this.token = options.token;
    this.retries = options.retries ?? 3;
    this.backoffMs = options.backoffMs ?? 250;
    this.fetchImpl = options.fetchImpl ?? fetch;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = { "Content-Type": "application/json" };
    if (this.token) {
      headers["Authorization"] = `Bearer ${this.token}`;
    }
    let lastError: unknown;
    for (let attempt = 0; attempt <= this.retries; attempt++) {
      if (attempt > 0) {
        await sleep(this.backoffMs * 2 ** (attempt - 1));
      }
      let response: Response;
      try {
        response = await this.fetchImpl(`${this.baseUrl}${path}`, {
          method,
          headers,
          body: body === undefined ? undefined : JSON.stringify(body),
        });
      } catch (error) {
        lastError = error;
        continue;
      }
      if (!response.ok) {
        let errorType = "HttpError";
        let detail = `${response.status} ${response.statusText}`;
        try {
          const parsed = (await response.json()) as { error?: string; detail?: string };
          errorType = parsed.error ?? errorType;
          detail = parsed.detail ?? detail;
        } catch {
          // non-JSON error body; keep the status line
        }
        throw new ApiError(response.status, errorType, detail);
      }
      return (await response.json()) as T;
    }
    throw lastError instanceof Error
      ? lastError
      : new Error(`network failure after ${this.retries + 1} attempts`);
  }

  health(): Promise<Health> {
    return this.request("GET", "/healthz");
  }

  createSession(req: CreateSessionRequest): Promise<SessionCreated> {
    return this.request("POST", "/sessions", req);
  }

  nextPair(sessionId: string, judgeId: string): Promise<NextPair> {
    const judge = encodeURIComponent(judgeId);
    return this.request("GET", `/sessions/${sessionId}/next-pair?judge=${judge}`);
  }

  submitJudgement(
    sessionId: string,
    req: SubmitJudgementRequest,
  ): Promise<SubmitJudgementResponse> {
    return this.request("POST", `/sessions/${sessionId}/judgements`, req);
  }

  results(sessionId: string): Promise<ResultsPayload> {
    return this.request("GET", `/sessions/${sessionId}/results`);
  }

  agreement(sessionId: string, judgeId?: string): Promise<AgreementPayload> {
    const filter = judgeId === undefined ? "" : `?judge=${encodeURIComponent(judgeId)}`;
    return this.request("GET", `/sessions/${sessionId}/agreement${filter}`);
  }

  audit(sessionId: string, judgeId?: string): Promise<AuditPayload> {
    const filter = judgeId === undefined ? "" : `?judge=${encodeURIComponent(judgeId)}`;
    return this.request("GET", `/sessions/${sessionId}/audit${filter}`);
  }
}
