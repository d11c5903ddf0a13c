/**
 * Controller contracts, replayed against recorded service exchanges:
 *
 *  - a 409 (stale revision) triggers an automatic state refresh and never
 *    a retry;
 *  - a 4xx witness rejection lands inline, next to the form that caused
 *    it, with the form still open for correction;
 *  - the notation toggle re-reads the session so every formula string on
 *    screen is server-rendered, including right after a mutation;
 *  - save hands the server's session file to the download sink
 *    byte-identical;
 *  - export shows the server's script verbatim.
 */

import { describe, expect, it } from "vitest";

import type { ErrorJson } from "../src/api.js";
import { findNode, textOf } from "../src/vdom.js";
import {
  ErrorsFile,
  ImportFile,
  NotationFile,
  ReplayTransport,
  canon,
  envelope,
  loadFixture,
  makeHarness,
} from "./helpers.js";

const errors = loadFixture<ErrorsFile>("errors.json");
const notation = loadFixture<NotationFile>("notation.json");
const imports = loadFixture<ImportFile>("import.json");

describe("stale revision (409)", () => {
  it("refreshes the session automatically and does not retry", async () => {
    const { create, rootApplicable, staleEnvelope, refreshed,
            refreshedApplicable } = errors.stale;
    const sid = create.id;
    const transport = new ReplayTransport([
      {
        method: "POST",
        path: "/sessions",
        body: { system: "SC", goal: "p --> p" },
        status: 201,
        payload: envelope(create),
      },
      {
        method: "GET",
        path: `/sessions/${sid}/applicable?goal=0`,
        body: null,
        status: 200,
        payload: envelope(rootApplicable),
      },
      // meanwhile another tab applied a rule; our apply is now stale
      {
        method: "POST",
        path: `/sessions/${sid}/apply`,
        body: { revision: 0, goal: 0, rule: { rule: "AlphaImp" } },
        status: 409,
        payload: staleEnvelope,
      },
      // the controller's recovery: re-read, then re-fetch the rules
      {
        method: "GET",
        path: `/sessions/${sid}`,
        body: null,
        status: 200,
        payload: envelope(refreshed),
      },
      {
        method: "GET",
        path: `/sessions/${sid}/applicable?goal=0`,
        body: null,
        status: 200,
        payload: envelope(refreshedApplicable),
      },
    ]);
    const harness = makeHarness(transport);
    const { controller } = harness;

    await controller.createSession("SC", "p --> p");
    controller.stopPolling();
    const template = rootApplicable.rules.find((r) => r.rule === "AlphaImp")!;
    await controller.clickRule(template);

    // the refreshed state is adopted wholesale; nothing was applied twice
    expect(canon(controller.state.session)).toBe(canon(refreshed));
    expect(controller.state.session!.revision).toBe(1);
    expect(controller.state.errors).toEqual({});
    expect(controller.state.busy).toBe(false);
    expect(controller.state.notice).toBe(
      "the session changed elsewhere — state refreshed, nothing applied",
    );

    const noticeNode = findNode(
      harness.tree(),
      (n) => n.attrs["class"] === "notice",
    );
    expect(noticeNode).not.toBeNull();
    expect(textOf(noticeNode!)).toContain("state refreshed");

    // assertDone proves the apply was never re-sent: a retry would have
    // shown up as an extra, unexpected request
    transport.assertDone();
  });
});

describe("witness rejection (400)", () => {
  it("lands inline next to the form, which stays open for correction", async () => {
    const { afterAlphaDis, applicable, template, badConst,
            rejectedEnvelope } = errors.freshness;
    const sid = afterAlphaDis.id;
    const transport = new ReplayTransport([
      {
        method: "POST",
        path: `/sessions/${sid}/apply`,
        body: {
          revision: afterAlphaDis.revision,
          goal: 0,
          rule: { rule: template.rule, const: badConst },
        },
        status: 400,
        payload: rejectedEnvelope,
      },
    ]);
    const harness = makeHarness(transport);
    const { controller } = harness;
    controller.state.session = afterAlphaDis;
    controller.state.applicable = applicable;

    // the form opens prefilled with the server's fresh-name suggestion
    await controller.clickRule(template);
    expect(controller.state.pendingWitness?.values).toEqual([
      template.suggestion,
    ]);
    let form = findNode(
      harness.tree(),
      (n) => n.tag === "form" && n.attrs["data-rule"] === template.rule,
    );
    expect(form).not.toBeNull();
    expect(
      findNode(form!, (n) => n.tag === "input")!.attrs["value"],
    ).toBe(template.suggestion);

    // the user types a constant that is not fresh and submits
    controller.witnessChange(0, badConst);
    await controller.witnessSubmit();

    const expected = (rejectedEnvelope as { error: ErrorJson }).error;
    expect(controller.state.errors["witness"]).toEqual({
      code: expected.code,
      message: expected.message,
    });
    // nothing moved: same revision, form still open with the typed value
    expect(controller.state.session!.revision).toBe(afterAlphaDis.revision);
    expect(controller.state.pendingWitness).not.toBeNull();
    expect(controller.state.busy).toBe(false);

    form = findNode(
      harness.tree(),
      (n) => n.tag === "form" && n.attrs["data-rule"] === template.rule,
    );
    expect(form).not.toBeNull();
    expect(findNode(form!, (n) => n.tag === "input")!.attrs["value"]).toBe(
      badConst,
    );
    const inline = findNode(
      form!,
      (n) => n.attrs["data-error-for"] === "witness",
    );
    expect(inline, "error must render inside the form").not.toBeNull();
    expect(textOf(inline!)).toBe(`${expected.code}: ${expected.message}`);

    transport.assertDone();
  });
});

describe("notation toggle", () => {
  it("re-reads the session server-rendered, also after a mutation", async () => {
    const sid = notation.create.id;
    const transport = new ReplayTransport([
      {
        method: "POST",
        path: "/sessions",
        body: { system: "SC", goal: "p --> (q --> p)" },
        status: 201,
        payload: envelope(notation.create),
      },
      {
        method: "GET",
        path: `/sessions/${sid}/applicable?goal=0`,
        body: null,
        status: 200,
        payload: envelope(notation.applicableRoot),
      },
      // the toggle: one server-rendered re-read plus a rules refresh
      {
        method: "GET",
        path: `/sessions/${sid}?notation=abstract`,
        body: null,
        status: 200,
        payload: envelope(notation.abstractRoot),
      },
      {
        method: "GET",
        path: `/sessions/${sid}/applicable?goal=0`,
        body: null,
        status: 200,
        payload: envelope(notation.applicableRoot),
      },
      // a mutation answers in standard notation …
      {
        method: "POST",
        path: `/sessions/${sid}/apply`,
        body: { revision: 0, goal: 0, rule: { rule: "AlphaImp" } },
        status: 200,
        payload: envelope(notation.applyResponse),
      },
      // … so the controller re-reads before adopting
      {
        method: "GET",
        path: `/sessions/${sid}?notation=abstract`,
        body: null,
        status: 200,
        payload: envelope(notation.abstractAfterApply),
      },
      {
        method: "GET",
        path: `/sessions/${sid}/applicable?goal=0`,
        body: null,
        status: 200,
        payload: envelope(notation.applicableAfter),
      },
    ]);
    const harness = makeHarness(transport);
    const { controller } = harness;

    await controller.createSession("SC", "p --> (q --> p)");
    controller.stopPolling();

    // toggling to the notation already shown is a no-op, no traffic
    const pending = transport.remaining();
    await controller.toggleNotation("standard");
    expect(transport.remaining()).toBe(pending);

    await controller.toggleNotation("abstract");
    let tree = harness.tree();
    expect(
      textOf(findNode(tree, (n) => n.attrs["class"] === "root-goal")!),
    ).toBe(notation.abstractRoot.goal);
    const goalTexts = (g: typeof notation.abstractRoot) =>
      g.open_goals.map((og) =>
        "formulas" in og ? og.formulas.join(", ") : "",
      );
    expect(
      textOf(findNode(tree, (n) => n.attrs["class"] === "goal-text")!),
    ).toBe(goalTexts(notation.abstractRoot)[0]);
    expect(
      findNode(
        tree,
        (n) => n.attrs["data-notation"] === "abstract",
      )!.attrs["class"],
    ).toBe("notation notation-active");

    // apply while in abstract notation: the adopted state is the
    // server-rendered abstract re-read, not the standard apply answer
    const template = notation.applicableRoot.rules.find(
      (r) => r.rule === "AlphaImp",
    )!;
    await controller.clickRule(template);
    expect(canon(controller.state.session)).toBe(
      canon(notation.abstractAfterApply),
    );
    tree = harness.tree();
    expect(
      textOf(findNode(tree, (n) => n.attrs["class"] === "goal-text")!),
    ).toBe(goalTexts(notation.abstractAfterApply)[0]);

    transport.assertDone();
  });
});

describe("load", () => {
  it("uploads a saved file and adopts the imported session", async () => {
    const transport = new ReplayTransport([
      {
        method: "POST",
        path: "/sessions",
        body: { file: imports.savedFile },
        status: 201,
        payload: envelope(imports.imported),
      },
      {
        method: "GET",
        path: `/sessions/${imports.imported.id}/applicable?goal=0`,
        body: null,
        status: 200,
        payload: envelope(imports.applicable),
      },
    ]);
    const harness = makeHarness(transport);
    await harness.controller.loadFile(imports.savedFile);
    harness.controller.stopPolling();

    // the import minted a fresh session around the same recorded history
    expect(canon(harness.controller.state.session)).toBe(
      canon(imports.imported),
    );
    expect(harness.controller.state.session!.id).not.toBe(imports.saved.id);
    expect(canon(harness.controller.state.session!.entries)).toBe(
      canon(imports.saved.entries),
    );
    const entries = findNode(
      harness.tree(),
      (n) => n.attrs["class"] === "history-entries",
    );
    expect(entries!.children.length).toBe(imports.imported.entries.length);
    transport.assertDone();
  });
});

describe("save and export", () => {
  it("save hands the server's session file to the sink byte-identical", () => {
    const harness = makeHarness(new ReplayTransport([]));
    harness.controller.state.session = errors.stale.create;
    harness.controller.save();
    expect(harness.downloads).toEqual([
      {
        name: `${errors.stale.create.id}.session.json`,
        content: errors.stale.create.file,
      },
    ]);
    // the file is the versioned format the service itself wrote
    const parsed = JSON.parse(harness.downloads[0]!.content);
    expect(parsed.version).toBe(1);
    expect(parsed.system).toBe("SC");
  });

  it("export shows the server's script verbatim", async () => {
    const { afterFirstApply } = errors.stale;
    const transport = new ReplayTransport([
      {
        method: "GET",
        path: `/sessions/${afterFirstApply.id}/export`,
        body: null,
        status: 200,
        payload: envelope(errors.stale.export),
      },
    ]);
    const harness = makeHarness(transport);
    harness.controller.state.session = afterFirstApply;
    await harness.controller.exportScript();
    expect(harness.controller.state.exportText).toBe(
      errors.stale.export.script,
    );
    const pre = findNode(
      harness.tree(),
      (n) => n.attrs["class"] === "export-text",
    );
    expect(textOf(pre!)).toBe(errors.stale.export.script);
    transport.assertDone();
  });
});
