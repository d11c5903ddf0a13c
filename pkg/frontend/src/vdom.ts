/**
 * A minimal virtual node tree.  The view builds plain data; `mount.ts`
 * turns it into DOM.  Keeping the view's output as data is what lets the
 * contract tests inspect exactly what would be rendered without a browser.
 */

export type EventHandler = (event: { target?: unknown }) => void;

export interface VNode {
  tag: string;
  attrs: Record<string, string>;
  on: Record<string, EventHandler>;
  children: (VNode | string)[];
}

export function h(
  tag: string,
  attrs: Record<string, string> = {},
  children: (VNode | string)[] = [],
  on: Record<string, EventHandler> = {},
): VNode {
  return { tag, attrs, on, children };
}

/** Depth-first search for the first node matching a predicate. */
export function findNode(
  root: VNode,
  predicate: (node: VNode) => boolean,
): VNode | null {
  if (predicate(root)) return root;
  for (const child of root.children) {
    if (typeof child === "string") continue;
    const hit = findNode(child, predicate);
    if (hit !== null) return hit;
  }
  return null;
}

/** All nodes matching a predicate, in document order. */
export function findAll(
  root: VNode,
  predicate: (node: VNode) => boolean,
): VNode[] {
  const out: VNode[] = [];
  const walk = (node: VNode): void => {
    if (predicate(node)) out.push(node);
    for (const child of node.children) {
      if (typeof child !== "string") walk(child);
    }
  };
  walk(root);
  return out;
}

/** Concatenated text content of a node's subtree. */
export function textOf(node: VNode): string {
  let out = "";
  for (const child of node.children) {
    out += typeof child === "string" ? child : textOf(child);
  }
  return out;
}
