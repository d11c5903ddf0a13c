/**
 * Pure view-model: the complete UI state plus the derivations the view
 * needs, every one of them a pure function of server payloads.
 *
 * The cardinal invariant is *zero client-side proof logic*: nothing here
 * decides which rules apply, whether a constant is fresh, or whether a
 * proof is valid.  Rule buttons are the `/applicable` payload verbatim,
 * badges are the `/warnings` payload verbatim, and formula strings are
 * rendered by the server.  The only knowledge this layer owns is how to
 * *serialize* a filled-in witness form back into the rule JSON the server
 * already documents.
 */

import type {
  ApplicableJson,
  AssessmentJson,
  Notation,
  OpenGoalJson,
  RuleJson,
  RuleTemplateJson,
  SessionJson,
  WitnessKind,
} from "./api.js";
import { isJudgmentGoal } from "./api.js";

export interface InlineError {
  code: string;
  message: string;
}

/** A witness form in progress for one rule template. */
export interface PendingWitness {
  template: RuleTemplateJson;
  /** One value per entry of template.needs, same order. */
  values: string[];
}

export interface ViewState {
  session: SessionJson | null;
  notation: Notation;
  /** Index into session.open_goals that rule buttons target. */
  selectedGoal: number;
  /** Last /applicable payload for the selected goal, or null while loading. */
  applicable: ApplicableJson | null;
  /** Latest assessment per open-goal index, from /warnings. */
  badges: Record<number, AssessmentJson>;
  pendingWitness: PendingWitness | null;
  /** Inline errors keyed by the control that caused them
   *  ("apply", "witness", "goto", "create", "load", "export"). */
  errors: Record<string, InlineError>;
  /** One-line notice, e.g. after an automatic refresh on a stale revision. */
  notice: string | null;
  /** Last exported script, shown in the export panel. */
  exportText: string | null;
  busy: boolean;
}

export function initialState(): ViewState {
  return {
    session: null,
    notation: "standard",
    selectedGoal: 0,
    applicable: null,
    badges: {},
    pendingWitness: null,
    errors: {},
    notice: null,
    exportText: null,
    busy: false,
  };
}

/**
 * The rule buttons for the current goal: exactly the server's list —
 * same rules, same order, nothing filtered, nothing added.
 */
export function ruleButtons(
  applicable: ApplicableJson | null,
): RuleTemplateJson[] {
  return applicable === null ? [] : applicable.rules;
}

export interface WitnessField {
  kind: WitnessKind;
  label: string;
  prefill: string;
}

const FIELD_LABELS: Record<WitnessKind, string> = {
  term: "term",
  const: "fresh constant",
  formula: "formula",
  target: "target sequent (comma-separated)",
};

/** The form fields a template asks for, in the server's stated order. */
export function witnessFields(template: RuleTemplateJson): WitnessField[] {
  return template.needs.map((kind) => ({
    kind,
    label: FIELD_LABELS[kind],
    prefill: kind === "const" && template.suggestion ? template.suggestion : "",
  }));
}

/**
 * Serialize a filled witness form into rule JSON.  This mirrors the
 * service's wire format: formula arguments ride in a `with` list (in
 * order), a term in `term`, a fresh constant in `const`, and an Ext
 * target in `to`.  The server re-parses and validates every value.
 */
export function ruleJsonFromWitness(pending: PendingWitness): RuleJson {
  const out: RuleJson = { rule: pending.template.rule };
  const withList: string[] = [];
  pending.template.needs.forEach((kind, i) => {
    const value = (pending.values[i] ?? "").trim();
    switch (kind) {
      case "formula":
        withList.push(value);
        break;
      case "term":
        out["term"] = value;
        break;
      case "const":
        out["const"] = value;
        break;
      case "target":
        out["to"] = value;
        break;
    }
  });
  if (withList.length > 0) {
    out["with"] = withList;
  }
  return out;
}

export type BadgeTone = "orange" | "neutral" | "ok";

/**
 * Badge tone for one goal's latest assessment: a likely-unprovable goal
 * gets the orange badge, an inconclusive probe stays neutral, a proved
 * goal gets a calm marker, and no assessment means no badge.
 */
export function badgeTone(
  assessment: AssessmentJson | undefined,
): BadgeTone | null {
  if (assessment === undefined) return null;
  switch (assessment.verdict) {
    case "LikelyUnprovable":
      return "orange";
    case "Unknown":
      return "neutral";
    case "Proved":
      return "ok";
  }
}

export function badgeTitle(assessment: AssessmentJson): string {
  switch (assessment.verdict) {
    case "LikelyUnprovable":
      return assessment.model
        ? `probably unprovable: falsified in a ${assessment.model.size}-element model`
        : "probably unprovable";
    case "Unknown":
      return "automatic probe inconclusive";
    case "Proved":
      return assessment.steps !== undefined
        ? `provable (${assessment.steps} steps found automatically)`
        : "provable";
  }
}

/** One line of text for an open goal, exactly as the server rendered it. */
export function goalText(goal: OpenGoalJson): string {
  if (isJudgmentGoal(goal)) {
    return goal.assumptions.length > 0
      ? `${goal.goal}  ⊢ from: ${goal.assumptions.join("; ")}`
      : goal.goal;
  }
  return goal.formulas.join(", ");
}

/** Human label for a history entry's action. */
export function describeAction(action: RuleJson | null): string {
  if (action === null) return "start";
  const parts: string[] = [action.rule];
  for (const key of ["term", "const", "to"]) {
    const value = action[key];
    if (typeof value === "string") parts.push(`${key}: ${value}`);
  }
  const withList = action["with"];
  if (Array.isArray(withList) && withList.length > 0) {
    parts.push(`with: ${withList.join(", ")}`);
  }
  return parts.join(" ");
}

export interface HistoryItem {
  index: number;
  parent: number | null;
  label: string;
  isCursor: boolean;
  /** Nesting depth along the parent chain, for indentation. */
  depth: number;
}

/**
 * The full history as clickable items — every recorded entry, with its
 * parent-chain depth.  Nothing is hidden: entry k is always present and
 * always clickable, which is what makes every past state reachable.
 */
export function historyItems(session: SessionJson): HistoryItem[] {
  const depths: number[] = [];
  return session.entries.map((entry, index) => {
    const depth = entry.parent === null ? 0 : (depths[entry.parent] ?? 0) + 1;
    depths[index] = depth;
    return {
      index,
      parent: entry.parent,
      label: describeAction(entry.action),
      isCursor: index === session.cursor,
      depth,
    };
  });
}

/** The entry reached by undo: the cursor entry's parent, if any. */
export function undoTarget(session: SessionJson): number | null {
  return session.entries[session.cursor]?.parent ?? null;
}

/** The entry reached by redo: the most recent child of the cursor. */
export function redoTarget(session: SessionJson): number | null {
  for (let i = session.entries.length - 1; i >= 0; i--) {
    if (session.entries[i]?.parent === session.cursor) return i;
  }
  return null;
}

/** Clamp the selected goal when a new payload has fewer open goals. */
export function clampSelectedGoal(
  session: SessionJson,
  selected: number,
): number {
  if (session.open_goals.length === 0) return 0;
  return Math.min(selected, session.open_goals.length - 1);
}
