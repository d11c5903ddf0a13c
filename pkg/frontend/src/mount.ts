/**
 * Turn a virtual node tree into real DOM.  A full rebuild per render is
 * plenty at this scale and keeps the renderer obviously correct.
 *
 * The document is passed in (rather than taken from a global) so the
 * renderer can be exercised against a stub document in tests.
 */

import type { VNode } from "./vdom.js";

export interface MinimalElement {
  setAttribute(name: string, value: string): void;
  appendChild(child: unknown): void;
  addEventListener(type: string, handler: (event: unknown) => void): void;
  replaceChildren?(...children: unknown[]): void;
}

export interface MinimalDocument {
  createElement(tag: string): MinimalElement;
  createTextNode(text: string): unknown;
}

export function build(doc: MinimalDocument, node: VNode | string): unknown {
  if (typeof node === "string") {
    return doc.createTextNode(node);
  }
  const element = doc.createElement(node.tag);
  for (const [name, value] of Object.entries(node.attrs)) {
    element.setAttribute(name, value);
  }
  for (const [type, handler] of Object.entries(node.on)) {
    element.addEventListener(type, (event) => {
      const e = event as {
        preventDefault?: () => void;
        target?: unknown;
      };
      if (type === "click" || type === "submit") e.preventDefault?.();
      handler({ target: e.target });
    });
  }
  for (const child of node.children) {
    element.appendChild(build(doc, child));
  }
  return element;
}

export function mount(
  doc: MinimalDocument,
  root: MinimalElement,
  tree: VNode,
): void {
  root.replaceChildren?.(build(doc, tree));
}
