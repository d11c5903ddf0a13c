/**
 * Shared test plumbing: typed access to the recorded fixtures and a strict
 * replay transport.
 *
 * The fixtures under test/fixtures/ were recorded from the live service by
 * tools/record_fixtures.py; nothing in them is hand-written.  The replay
 * transport feeds those recordings back to the client while checking that
 * every request the client makes — method, path, and body — is exactly the
 * one the real browser session made.  That is what turns these unit tests
 * into contract tests.
 */

import { readFileSync } from "node:fs";
import { expect } from "vitest";

import type {
  ApplicableJson,
  AssessmentJson,
  FetchLike,
  OpenGoalJson,
  RuleJson,
  RuleTemplateJson,
  SessionJson,
  WarningsJson,
} from "../src/api.js";
import { ProofkitClient } from "../src/api.js";
import { Controller } from "../src/controller.js";
import type { VNode } from "../src/vdom.js";
import { view, type Actions } from "../src/view.js";

// ------------------------------------------------------------ fixtures

export function loadFixture<T>(name: string): T {
  const url = new URL(`./fixtures/${name}`, import.meta.url);
  return JSON.parse(readFileSync(url, "utf8")) as T;
}

export interface ApplicableFixture {
  label: string;
  system: string;
  open_goal: OpenGoalJson;
  request: { goal: number };
  response: ApplicableJson;
}

export interface ApplicableFile {
  note: string;
  fixtures: ApplicableFixture[];
}

export interface RecordedExchange {
  method: string;
  path: string;
  body: unknown;
  status: number;
  payload: unknown;
}

export type UiAction =
  | { ui: "create"; system: string; goal: string }
  | { ui: "rule"; template: RuleTemplateJson; values: string[] }
  | { ui: "goto"; index: number };

export interface HistoryFile {
  note: string;
  goal: string;
  entryCount: number;
  uiActions: UiAction[];
  transcript: RecordedExchange[];
  sweep: { index: number; exchanges: RecordedExchange[] }[];
}

export interface FalsityFile {
  note: string;
  serverElapsedMs: number;
  create: SessionJson;
  applicable: ApplicableJson;
  emptyPoll: WarningsJson;
  flaggedPoll: WarningsJson;
}

export interface NotationFile {
  note: string;
  create: SessionJson;
  applicableRoot: ApplicableJson;
  abstractRoot: SessionJson;
  applyResponse: SessionJson;
  abstractAfterApply: SessionJson;
  applicableAfter: ApplicableJson;
}

export interface ImportFile {
  note: string;
  savedFile: string;
  saved: SessionJson;
  imported: SessionJson;
  applicable: ApplicableJson;
}

export interface ErrorsFile {
  note: string;
  stale: {
    create: SessionJson;
    rootApplicable: ApplicableJson;
    afterFirstApply: SessionJson;
    staleEnvelope: unknown;
    refreshed: SessionJson;
    refreshedApplicable: ApplicableJson;
    export: { script: string };
  };
  freshness: {
    afterAlphaDis: SessionJson;
    applicable: ApplicableJson;
    template: RuleTemplateJson;
    badConst: string;
    rejectedEnvelope: unknown;
  };
  unknownSession: unknown;
}

// ------------------------------------------------------------ transport

/** JSON with object keys sorted, so comparisons ignore key order. */
export function canon(value: unknown): string {
  return JSON.stringify(sortKeys(value));
}

function sortKeys(value: unknown): unknown {
  if (Array.isArray(value)) return value.map(sortKeys);
  if (value !== null && typeof value === "object") {
    const out: Record<string, unknown> = {};
    for (const key of Object.keys(value as object).sort()) {
      out[key] = sortKeys((value as Record<string, unknown>)[key]);
    }
    return out;
  }
  return value;
}

export function envelope(data: unknown): unknown {
  return { ok: true, data };
}

/**
 * A strict mock transport.  It answers from a queue of recorded exchanges
 * and records a violation whenever the client's request differs from the
 * recording.  Violations are collected rather than thrown, because the API
 * client wraps transport throws in its own error type; every test ends
 * with `transport.assertDone()` (or at least `assertClean()`), which
 * surfaces all mismatches at once.
 *
 * Background warning polls are real browser traffic but deliberately not
 * part of the recorded streams; they are answered with a revision that the
 * controller always discards, without consuming an expectation.
 */
export class ReplayTransport {
  private cursor = 0;
  readonly violations: string[] = [];

  constructor(private readonly expected: RecordedExchange[]) {}

  remaining(): number {
    return this.expected.length - this.cursor;
  }

  assertClean(): void {
    expect(this.violations).toEqual([]);
  }

  assertDone(): void {
    this.assertClean();
    expect(this.remaining()).toBe(0);
  }

  readonly fetch: FetchLike = (url, init) => {
    const method = init?.method ?? "GET";
    const upcoming = this.expected[this.cursor];
    if (
      method === "GET" &&
      url.endsWith("/warnings") &&
      (upcoming === undefined || upcoming.path !== url)
    ) {
      // an unscripted background poll; the stale revision is dropped whole
      return respond(200, envelope({ revision: -1, warnings: {} }));
    }
    if (upcoming === undefined) {
      this.violations.push(`unexpected request: ${method} ${url}`);
      return respond(500, {
        ok: false,
        error: { code: "Unexpected", message: url, detail: null },
      });
    }
    this.cursor += 1;
    if (method !== upcoming.method || url !== upcoming.path) {
      this.violations.push(
        `request ${this.cursor - 1}: got ${method} ${url}, ` +
          `recorded ${upcoming.method} ${upcoming.path}`,
      );
    }
    const body = init?.body === undefined ? null : JSON.parse(init.body);
    if (canon(body) !== canon(upcoming.body)) {
      this.violations.push(
        `body of ${method} ${url}: got ${canon(body)}, ` +
          `recorded ${canon(upcoming.body)}`,
      );
    }
    return respond(upcoming.status, upcoming.payload);
  };
}

function respond(
  status: number,
  payload: unknown,
): Promise<{ status: number; json(): Promise<unknown> }> {
  return Promise.resolve({
    status,
    json: () => Promise.resolve(payload),
  });
}

// ------------------------------------------------------------ controller

export interface Harness {
  controller: Controller;
  /** Render the current state through the real view. */
  tree: () => VNode;
  renders: () => number;
  downloads: { name: string; content: string }[];
}

/** A controller wired the same way main.ts wires the browser one. */
export function makeHarness(
  transport: ReplayTransport,
  options: { pollMs?: number } = {},
): Harness {
  let count = 0;
  const downloads: { name: string; content: string }[] = [];
  const client = new ProofkitClient(transport.fetch);
  const controller = new Controller(
    client,
    () => {
      count += 1;
    },
    {
      pollMs: options.pollMs ?? 300,
      download: (file) => downloads.push(file),
    },
  );
  return {
    controller,
    tree: () => view(controller.state, controllerActions(controller)),
    renders: () => count,
    downloads,
  };
}

/** Replay one recorded UI action through the controller. */
export async function performAction(
  controller: Controller,
  action: UiAction,
): Promise<void> {
  if (action.ui === "create") {
    await controller.createSession(action.system, action.goal);
    controller.stopPolling();
    return;
  }
  if (action.ui === "goto") {
    await controller.gotoEntry(action.index);
    return;
  }
  await controller.clickRule(action.template);
  if (action.template.needs.length > 0) {
    action.values.forEach((value, position) =>
      controller.witnessChange(position, value),
    );
    await controller.witnessSubmit();
  }
}

/** A synthetic session wrapper for rendering one recorded open goal. */
export function sessionAround(
  fixture: ApplicableFixture,
  goal = "fixture",
): SessionJson {
  return {
    id: "fixture",
    system: fixture.system as SessionJson["system"],
    goal,
    revision: 0,
    cursor: 0,
    closed: false,
    report: { verdict: "Incomplete", steps: 0 },
    open_goals: [fixture.open_goal],
    entries: [{ parent: null, action: null, hash: "root" }],
    file: "{}",
  };
}

/** An Actions sink that does nothing; for pure view renders. */
export const noActions: Actions = {
  createSession: () => undefined,
  loadFile: () => undefined,
  selectGoal: () => undefined,
  clickRule: () => undefined,
  witnessChange: () => undefined,
  witnessSubmit: () => undefined,
  witnessCancel: () => undefined,
  gotoEntry: () => undefined,
  toggleNotation: () => undefined,
  save: () => undefined,
  exportScript: () => undefined,
};

/** The Actions wiring main.ts uses, against a given controller. */
export function controllerActions(controller: Controller): Actions {
  return {
    createSession: (system, goal) =>
      void controller.createSession(system, goal),
    loadFile: (text) => void controller.loadFile(text),
    selectGoal: (index) => void controller.selectGoal(index),
    clickRule: (template) => void controller.clickRule(template),
    witnessChange: (position, value) =>
      controller.witnessChange(position, value),
    witnessSubmit: () => void controller.witnessSubmit(),
    witnessCancel: () => controller.witnessCancel(),
    gotoEntry: (index) => void controller.gotoEntry(index),
    toggleNotation: (notation) => void controller.toggleNotation(notation),
    save: () => controller.save(),
    exportScript: () => void controller.exportScript(),
  };
}

/** The rule JSON of every recorded /apply body, in transcript order. */
export function recordedApplyRules(
  transcript: RecordedExchange[],
): RuleJson[] {
  return transcript
    .filter((e) => e.method === "POST" && e.path.endsWith("/apply"))
    .map((e) => (e.body as { rule: RuleJson }).rule);
}

export function assessmentFixture(
  file: FalsityFile,
): AssessmentJson | undefined {
  return file.flaggedPoll.warnings["0"];
}
