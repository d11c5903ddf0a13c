/**
 * The controller wires view actions to API calls.  There is no optimistic
 * update anywhere: every mutation round-trips and the next render shows
 * exactly what the server answered.  A stale-revision conflict (HTTP 409)
 * never fails loudly — it triggers an automatic state refresh so the user
 * sees what happened elsewhere and can re-decide.
 */

import {
  ApiError,
  AssessmentJson,
  Notation,
  ProofkitClient,
  RuleJson,
  RuleTemplateJson,
  SessionJson,
  SystemName,
} from "./api.js";
import {
  PendingWitness,
  ViewState,
  clampSelectedGoal,
  initialState,
  ruleJsonFromWitness,
  witnessFields,
} from "./state.js";

export interface Download {
  name: string;
  content: string;
}

export interface ControllerOptions {
  /** Warning-poll period in milliseconds (default 300). */
  pollMs?: number;
  /** Sink for save(): receives the session file to download. */
  download?: (file: Download) => void;
}

export class Controller {
  readonly state: ViewState = initialState();
  private pollHandle: ReturnType<typeof setInterval> | null = null;
  private readonly pollMs: number;
  private readonly download: (file: Download) => void;
  private polling = false;

  constructor(
    private readonly client: ProofkitClient,
    private readonly onRender: (state: ViewState) => void,
    options: ControllerOptions = {},
  ) {
    this.pollMs = options.pollMs ?? 300;
    this.download = options.download ?? (() => undefined);
  }

  private render(): void {
    this.onRender(this.state);
  }

  private fail(key: string, error: unknown): void {
    if (error instanceof ApiError) {
      this.state.errors[key] = { code: error.code, message: error.message };
    } else {
      this.state.errors[key] = { code: "Error", message: String(error) };
    }
    this.state.busy = false;
    this.render();
  }

  private clearTransient(): void {
    this.state.errors = {};
    this.state.notice = null;
  }

  /** Adopt a fresh session payload as the single source of truth. */
  private adopt(session: SessionJson, keepBadges = false): void {
    this.state.session = session;
    this.state.selectedGoal = clampSelectedGoal(
      session,
      this.state.selectedGoal,
    );
    if (!keepBadges) this.state.badges = {};
    this.state.pendingWitness = null;
    this.state.exportText = null;
  }

  /** Re-read the session (server-rendered in the current notation). */
  private async fetchSession(id: string): Promise<SessionJson> {
    return this.client.getSession(
      id,
      this.state.notation === "standard" ? undefined : this.state.notation,
    );
  }

  private async refreshApplicable(): Promise<void> {
    const session = this.state.session;
    if (session === null || session.closed) {
      this.state.applicable = null;
      return;
    }
    this.state.applicable = await this.client.applicable(
      session.id,
      this.state.selectedGoal,
    );
  }

  /** After apply/goto (which answer in standard notation), re-read when the
   * view is in abstract notation so all strings stay server-rendered. */
  private async adoptMutationResult(session: SessionJson): Promise<void> {
    if (this.state.notation !== "standard") {
      session = await this.fetchSession(session.id);
    }
    this.adopt(session);
    await this.refreshApplicable();
  }

  /** Automatic recovery from a stale revision: refresh, never retry. */
  private async recoverFromStale(): Promise<void> {
    const id = this.state.session?.id;
    if (id === undefined) return;
    const session = await this.fetchSession(id);
    this.adopt(session);
    await this.refreshApplicable();
    this.state.notice =
      "the session changed elsewhere — state refreshed, nothing applied";
    this.state.busy = false;
    this.render();
  }

  private async mutate(
    key: string,
    send: (session: SessionJson) => Promise<SessionJson>,
  ): Promise<void> {
    const session = this.state.session;
    if (session === null) return;
    this.clearTransient();
    this.state.busy = true;
    this.render();
    try {
      const next = await send(session);
      await this.adoptMutationResult(next);
      this.state.busy = false;
      this.render();
    } catch (error) {
      if (error instanceof ApiError && error.status === 409) {
        await this.recoverFromStale();
        return;
      }
      this.fail(key, error);
    }
  }

  async createSession(system: string, goal: string): Promise<void> {
    this.clearTransient();
    this.state.busy = true;
    this.render();
    try {
      const session = await this.client.createSession(
        system as SystemName,
        goal,
      );
      this.adopt(session);
      await this.refreshApplicable();
      this.state.busy = false;
      this.render();
      this.startPolling();
    } catch (error) {
      this.fail("create", error);
    }
  }

  async loadFile(text: string): Promise<void> {
    this.clearTransient();
    this.state.busy = true;
    this.render();
    try {
      const session = await this.client.importSession(text);
      this.adopt(session);
      await this.refreshApplicable();
      this.state.busy = false;
      this.render();
      this.startPolling();
    } catch (error) {
      this.fail("load", error);
    }
  }

  async selectGoal(index: number): Promise<void> {
    const session = this.state.session;
    if (session === null) return;
    this.clearTransient();
    this.state.selectedGoal = index;
    this.state.pendingWitness = null;
    try {
      this.state.applicable = await this.client.applicable(session.id, index);
      this.render();
    } catch (error) {
      this.fail("apply", error);
    }
  }

  /** A rule button: argument-free rules go straight to the server;
   *  templates with arguments open the witness form instead. */
  async clickRule(template: RuleTemplateJson): Promise<void> {
    if (template.needs.length === 0) {
      await this.applyRule({ rule: template.rule }, "apply");
      return;
    }
    this.clearTransient();
    const pending: PendingWitness = {
      template,
      values: witnessFields(template).map((field) => field.prefill),
    };
    this.state.pendingWitness = pending;
    this.render();
  }

  witnessChange(position: number, value: string): void {
    // Deliberately no render: the input already shows the typed text, and
    // re-rendering mid-keystroke would drop focus.
    const pending = this.state.pendingWitness;
    if (pending !== null) pending.values[position] = value;
  }

  async witnessSubmit(): Promise<void> {
    const pending = this.state.pendingWitness;
    if (pending === null) return;
    await this.applyRule(ruleJsonFromWitness(pending), "witness");
  }

  witnessCancel(): void {
    this.state.pendingWitness = null;
    this.state.errors = {};
    this.render();
  }

  private async applyRule(rule: RuleJson, errorKey: string): Promise<void> {
    await this.mutate(errorKey, (session) =>
      this.client.apply(session.id, {
        revision: session.revision,
        goal: this.state.selectedGoal,
        rule,
      }),
    );
  }

  async gotoEntry(index: number): Promise<void> {
    await this.mutate("goto", (session) =>
      this.client.goto(session.id, { revision: session.revision, index }),
    );
  }

  async toggleNotation(notation: Notation): Promise<void> {
    const session = this.state.session;
    if (session === null || this.state.notation === notation) return;
    this.clearTransient();
    this.state.notation = notation;
    try {
      // Server-rendered re-read; formulas are never re-printed locally.
      this.adopt(await this.fetchSession(session.id), true);
      await this.refreshApplicable();
      this.render();
    } catch (error) {
      this.fail("apply", error);
    }
  }

  save(): void {
    const session = this.state.session;
    if (session === null) return;
    this.download({
      name: `${session.id}.session.json`,
      content: session.file,
    });
  }

  async exportScript(): Promise<void> {
    const session = this.state.session;
    if (session === null) return;
    this.clearTransient();
    try {
      const result = await this.client.exportScript(session.id);
      this.state.exportText = result.script;
      this.render();
    } catch (error) {
      this.fail("export", error);
    }
  }

  /** Merge one /warnings payload; stale revisions are dropped whole. */
  private acceptWarnings(payload: {
    revision: number;
    warnings: Record<string, AssessmentJson>;
  }): void {
    const session = this.state.session;
    if (session === null || payload.revision !== session.revision) return;
    let changed = false;
    for (const [key, assessment] of Object.entries(payload.warnings)) {
      this.state.badges[Number(key)] = assessment;
      changed = true;
    }
    if (changed) this.render();
  }

  async pollWarningsOnce(): Promise<void> {
    const session = this.state.session;
    if (session === null || this.polling) return;
    this.polling = true;
    try {
      this.acceptWarnings(await this.client.warnings(session.id));
    } catch {
      // Polling is best-effort; a failed poll changes nothing.
    } finally {
      this.polling = false;
    }
  }

  startPolling(): void {
    if (this.pollHandle !== null) return;
    this.pollHandle = setInterval(() => {
      void this.pollWarningsOnce();
    }, this.pollMs);
  }

  stopPolling(): void {
    if (this.pollHandle !== null) {
      clearInterval(this.pollHandle);
      this.pollHandle = null;
    }
  }
}
