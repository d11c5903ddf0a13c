/**
 * The view: a pure function from ViewState (plus an Actions sink) to a
 * virtual node tree.  Every formula string shown here came rendered from
 * the server; the view never pretty-prints, reorders, or filters proof
 * content.
 */

import type { AssessmentJson, RuleTemplateJson } from "./api.js";
import {
  ViewState,
  badgeTitle,
  badgeTone,
  goalText,
  historyItems,
  redoTarget,
  ruleButtons,
  undoTarget,
  witnessFields,
} from "./state.js";
import { VNode, h } from "./vdom.js";

/** Everything the view can ask the controller to do. */
export interface Actions {
  createSession(system: string, goal: string): void;
  loadFile(text: string): void;
  selectGoal(index: number): void;
  clickRule(template: RuleTemplateJson): void;
  witnessChange(position: number, value: string): void;
  witnessSubmit(): void;
  witnessCancel(): void;
  gotoEntry(index: number): void;
  toggleNotation(notation: "standard" | "abstract"): void;
  save(): void;
  exportScript(): void;
}

function errorLine(state: ViewState, key: string): VNode | null {
  const error = state.errors[key];
  if (!error) return null;
  return h("p", { class: "inline-error", "data-error-for": key }, [
    `${error.code}: ${error.message}`,
  ]);
}

function compact(children: (VNode | string | null)[]): (VNode | string)[] {
  return children.filter((c): c is VNode | string => c !== null);
}

function badge(assessment: AssessmentJson | undefined): VNode | null {
  const tone = badgeTone(assessment);
  if (tone === null || assessment === undefined) return null;
  return h(
    "span",
    {
      class: `badge badge-${tone}`,
      title: badgeTitle(assessment),
      "data-verdict": assessment.verdict,
    },
    [tone === "orange" ? "!" : tone === "neutral" ? "?" : "✓"],
  );
}

function goalsPanel(state: ViewState, actions: Actions): VNode {
  const session = state.session!;
  if (session.closed) {
    return h("section", { class: "goals" }, [
      h("p", { class: "all-done" }, [
        `Proof complete — ${session.report.steps} steps.`,
      ]),
    ]);
  }
  return h(
    "section",
    { class: "goals" },
    session.open_goals.map((goal, index) =>
      h(
        "div",
        {
          class:
            index === state.selectedGoal ? "goal goal-selected" : "goal",
          "data-goal": String(index),
        },
        compact([
          h("span", { class: "goal-index" }, [`${index}`]),
          h("span", { class: "goal-text" }, [goalText(goal)]),
          badge(state.badges[index]),
        ]),
        { click: () => actions.selectGoal(index) },
      ),
    ),
  );
}

function witnessForm(state: ViewState, actions: Actions): VNode | null {
  const pending = state.pendingWitness;
  if (pending === null) return null;
  const fields = witnessFields(pending.template);
  return h(
    "form",
    { class: "witness", "data-rule": pending.template.rule },
    compact([
      h("h3", {}, [pending.template.rule]),
      ...fields.map((field, position) =>
        h("label", { class: "witness-field" }, [
          field.label,
          h(
            "input",
            {
              name: `arg${position}`,
              value: pending.values[position] ?? field.prefill,
            },
            [],
            {
              input: (event) =>
                actions.witnessChange(
                  position,
                  String(
                    (event.target as { value?: string } | undefined)?.value ??
                      "",
                  ),
                ),
            },
          ),
        ]),
      ),
      errorLine(state, "witness"),
      h("button", { type: "submit" }, ["apply"], {
        click: () => actions.witnessSubmit(),
      }),
      h("button", { type: "button" }, ["cancel"], {
        click: () => actions.witnessCancel(),
      }),
    ]),
  );
}

function rulesPanel(state: ViewState, actions: Actions): VNode {
  const buttons = ruleButtons(state.applicable);
  return h(
    "section",
    { class: "rules" },
    compact([
      ...buttons.map((template) =>
        h(
          "button",
          {
            class: "rule-button",
            "data-rule": template.rule,
            "data-needs": template.needs.join(","),
          },
          [template.rule],
          { click: () => actions.clickRule(template) },
        ),
      ),
      errorLine(state, "apply"),
      witnessForm(state, actions),
    ]),
  );
}

function historyPanel(state: ViewState, actions: Actions): VNode {
  const session = state.session!;
  const undo = undoTarget(session);
  const redo = redoTarget(session);
  return h(
    "section",
    { class: "history" },
    compact([
      h("div", { class: "history-controls" }, [
        h(
          "button",
          undo === null
            ? { disabled: "disabled", "data-nav": "undo" }
            : { "data-nav": "undo" },
          ["undo"],
          undo === null ? {} : { click: () => actions.gotoEntry(undo) },
        ),
        h(
          "button",
          redo === null
            ? { disabled: "disabled", "data-nav": "redo" }
            : { "data-nav": "redo" },
          ["redo"],
          redo === null ? {} : { click: () => actions.gotoEntry(redo) },
        ),
      ]),
      h(
        "ol",
        { class: "history-entries" },
        historyItems(session).map((item) =>
          h("li", { style: `margin-left:${item.depth}em` }, [
            h(
              "button",
              {
                class: item.isCursor
                  ? "history-entry history-cursor"
                  : "history-entry",
                "data-entry": String(item.index),
              },
              [`${item.index}: ${item.label}`],
              { click: () => actions.gotoEntry(item.index) },
            ),
          ]),
        ),
      ),
      errorLine(state, "goto"),
    ]),
  );
}

function toolbar(state: ViewState, actions: Actions): VNode {
  const session = state.session!;
  return h(
    "header",
    { class: "toolbar" },
    compact([
      h("span", { class: "session-meta" }, [
        `${session.system} · revision ${session.revision} · `,
        h("span", { class: "report" }, [
          `${session.report.verdict} (${session.report.steps} steps)`,
        ]),
      ]),
      h("span", { class: "notation-toggle" }, [
        ...(["standard", "abstract"] as const).map((notation) =>
          h(
            "button",
            {
              class:
                state.notation === notation
                  ? "notation notation-active"
                  : "notation",
              "data-notation": notation,
            },
            [notation],
            { click: () => actions.toggleNotation(notation) },
          ),
        ),
      ]),
      h("button", { "data-tool": "save" }, ["save"], {
        click: () => actions.save(),
      }),
      h("button", { "data-tool": "export" }, ["export"], {
        click: () => actions.exportScript(),
      }),
      errorLine(state, "export"),
    ]),
  );
}

function sessionScreen(state: ViewState, actions: Actions): VNode {
  const session = state.session!;
  return h(
    "main",
    { class: "session", "data-session": session.id },
    compact([
      toolbar(state, actions),
      state.notice === null
        ? null
        : h("p", { class: "notice" }, [state.notice]),
      h("h2", { class: "root-goal" }, [session.goal]),
      goalsPanel(state, actions),
      rulesPanel(state, actions),
      historyPanel(state, actions),
      state.exportText === null
        ? null
        : h("pre", { class: "export-text" }, [state.exportText]),
    ]),
  );
}

function startScreen(state: ViewState, actions: Actions): VNode {
  let system = "SC";
  let goal = "";
  let file = "";
  return h(
    "main",
    { class: "start" },
    compact([
      h("h1", {}, ["New proof session"]),
      h(
        "select",
        { "data-field": "system" },
        [
          h("option", { value: "SC" }, ["sequent calculus"]),
          h("option", { value: "ND" }, ["natural deduction"]),
        ],
        {
          change: (event) => {
            system = String(
              (event.target as { value?: string } | undefined)?.value ?? "SC",
            );
          },
        },
      ),
      h("input", { "data-field": "goal", placeholder: "p --> p" }, [], {
        input: (event) => {
          goal = String(
            (event.target as { value?: string } | undefined)?.value ?? "",
          );
        },
      }),
      h("button", { "data-tool": "create" }, ["start"], {
        click: () => actions.createSession(system, goal),
      }),
      errorLine(state, "create"),
      h("h2", {}, ["… or load a saved session"]),
      h("textarea", { "data-field": "file" }, [], {
        input: (event) => {
          file = String(
            (event.target as { value?: string } | undefined)?.value ?? "",
          );
        },
      }),
      h("button", { "data-tool": "load" }, ["load"], {
        click: () => actions.loadFile(file),
      }),
      errorLine(state, "load"),
    ]),
  );
}

export function view(state: ViewState, actions: Actions): VNode {
  const body =
    state.session === null
      ? startScreen(state, actions)
      : sessionScreen(state, actions);
  return h(
    "div",
    { class: state.busy ? "app app-busy" : "app" },
    [body],
  );
}
