import type { ConstrainedPoint, PenaltyPoint, SolvePoint, Universe } from "./types.js";

export interface ConstrainedRequestBody {
  w: number;
  dp: number;
  dr: number;
  w_r?: number;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    detail: string,
  ) {
    super(detail);
  }
}

async function parseOrThrow<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let detail = `${response.status}`;
    try {
      const body = await response.json();
      detail = typeof body.detail === "string" ? body.detail : JSON.stringify(body.detail);
    } catch {
      detail = response.statusText;
    }
    throw new ApiError(response.status, detail);
  }
  return (await response.json()) as T;
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: typeof fetch = fetch,
  ) {}

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.fetchImpl(`${this.baseUrl}${path}`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    }).then((r) => parseOrThrow<T>(r));
  }

  universe(): Promise<Universe> {
    return this.fetchImpl(`${this.baseUrl}/api/universe`).then((r) =>
      parseOrThrow<Universe>(r),
    );
  }

  solveBaseline(w: number): Promise<SolvePoint> {
    return this.post("/api/solve/baseline", { w });
  }

  solvePenalty(w: number, wd: number): Promise<PenaltyPoint> {
    return this.post("/api/solve/penalty", { w, w_d: wd });
  }

  solveConstrained(body: ConstrainedRequestBody): Promise<ConstrainedPoint> {
    return this.post("/api/solve/constrained", body);
  }
}
