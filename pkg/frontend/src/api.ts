/**
 * Typed client for the proof service JSON API.
 *
 * Every response is an envelope `{ok: true, data} | {ok: false, error}`;
 * this module unwraps it and surfaces failures as `ApiError`, carrying the
 * HTTP status and the server's error code verbatim.  The client performs no
 * proof logic of any kind — it moves JSON.
 */

export type Notation = "standard" | "abstract";
export type SystemName = "SC" | "ND";
export type WitnessKind = "term" | "const" | "formula" | "target";

/** A rule as sent to /apply or found in a history entry's `action`. */
export interface RuleJson {
  rule: string;
  [argument: string]: unknown;
}

/** An applicable rule with the argument kinds the caller must supply. */
export interface RuleTemplateJson {
  rule: string;
  needs: WitnessKind[];
  suggestion?: string;
}

export interface ApplicableJson {
  goal: number;
  rules: RuleTemplateJson[];
}

export interface SequentGoalJson {
  formulas: string[];
}

export interface JudgmentGoalJson {
  goal: string;
  assumptions: string[];
}

export type OpenGoalJson = SequentGoalJson | JudgmentGoalJson;

export function isJudgmentGoal(g: OpenGoalJson): g is JudgmentGoalJson {
  return "goal" in g;
}

export interface EntryJson {
  parent: number | null;
  action: RuleJson | null;
  hash: string;
}

export interface ReportSummaryJson {
  verdict: "Complete" | "Incomplete" | "Invalid";
  steps: number;
}

export interface SessionJson {
  id: string;
  system: SystemName;
  goal: string;
  revision: number;
  cursor: number;
  closed: boolean;
  report: ReportSummaryJson;
  open_goals: OpenGoalJson[];
  entries: EntryJson[];
  file: string;
}

export interface ModelJson {
  size: number;
  functions: {
    name: string;
    arity: number;
    table: { args: number[]; value: number }[];
  }[];
  predicates: { name: string; arity: number; holds: number[][] }[];
}

export interface AssessmentJson {
  verdict: "Proved" | "LikelyUnprovable" | "Unknown";
  steps?: number;
  script?: string;
  model?: ModelJson;
  env?: { values: number[] };
}

export interface WarningsJson {
  revision: number;
  warnings: Record<string, AssessmentJson>;
}

export interface CheckErrorJson {
  code: string;
  message: string;
  path: number[];
}

export interface CheckReportJson {
  verdict: "Complete" | "Incomplete" | "Invalid";
  steps: number;
  rules_used: Record<string, number>;
  open_goals: number;
  error?: CheckErrorJson;
}

export interface ErrorJson {
  code: string;
  message: string;
  detail: unknown;
}

export type Envelope<T> =
  | { ok: true; data: T }
  | { ok: false; error: ErrorJson };

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly detail: unknown = null,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

/** The slice of `fetch` the client needs; injectable for tests. */
export type FetchLike = (
  url: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string },
) => Promise<{ status: number; json(): Promise<unknown> }>;

export interface BudgetJson {
  max_gamma?: number;
  max_expansions?: number;
  deadline?: number;
}

export class ProofkitClient {
  constructor(
    private readonly fetchImpl: FetchLike,
    private readonly base: string = "",
  ) {}

  private async call<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    let response: { status: number; json(): Promise<unknown> };
    try {
      response = await this.fetchImpl(this.base + path, {
        method,
        headers:
          body === undefined ? {} : { "content-type": "application/json" },
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (err) {
      throw new ApiError(0, "Unreachable", String(err));
    }
    let payload: unknown;
    try {
      payload = await response.json();
    } catch {
      throw new ApiError(response.status, "BadResponse", "non-JSON response");
    }
    const envelope = payload as Envelope<T>;
    if (envelope && envelope.ok === true) {
      return envelope.data;
    }
    if (envelope && envelope.ok === false) {
      const e = envelope.error;
      throw new ApiError(response.status, e.code, e.message, e.detail);
    }
    throw new ApiError(response.status, "BadResponse", "not an envelope");
  }

  createSession(system: SystemName, goal: string): Promise<SessionJson> {
    return this.call("POST", "/sessions", { system, goal });
  }

  importSession(file: string): Promise<SessionJson> {
    return this.call("POST", "/sessions", { file });
  }

  getSession(id: string, notation?: Notation): Promise<SessionJson> {
    const q = notation ? `?notation=${encodeURIComponent(notation)}` : "";
    return this.call("GET", `/sessions/${encodeURIComponent(id)}${q}`);
  }

  applicable(id: string, goal: number): Promise<ApplicableJson> {
    return this.call(
      "GET",
      `/sessions/${encodeURIComponent(id)}/applicable?goal=${goal}`,
    );
  }

  /** Note: apply/goto/export answer in standard notation; when the view is
   * in abstract notation the controller re-reads the session afterwards. */
  apply(
    id: string,
    args: { revision: number; goal: number; rule: RuleJson },
  ): Promise<SessionJson> {
    return this.call(
      "POST",
      `/sessions/${encodeURIComponent(id)}/apply`,
      args,
    );
  }

  goto(
    id: string,
    args: { revision: number; index: number },
  ): Promise<SessionJson> {
    return this.call(
      "POST",
      `/sessions/${encodeURIComponent(id)}/goto`,
      args,
    );
  }

  exportScript(id: string): Promise<{ script: string }> {
    return this.call("GET", `/sessions/${encodeURIComponent(id)}/export`);
  }

  warnings(id: string): Promise<WarningsJson> {
    return this.call("GET", `/sessions/${encodeURIComponent(id)}/warnings`);
  }

  check(args: {
    script: string;
    format?: string;
    axioms?: string;
  }): Promise<CheckReportJson> {
    return this.call("POST", "/check", args);
  }

  prove(args: {
    formula?: string;
    sequent?: string;
    budget?: BudgetJson;
    notation?: Notation;
  }): Promise<AssessmentJson> {
    return this.call("POST", "/prove", args);
  }

  countermodel(args: {
    formula: string;
    max_size: number;
    budget?: number;
  }): Promise<
    | { verdict: "Countermodel"; model: ModelJson; env: { values: number[] } }
    | { verdict: "Exhausted"; max_size: number }
    | { verdict: "BudgetExceeded" }
  > {
    return this.call("POST", "/countermodel", args);
  }
}
