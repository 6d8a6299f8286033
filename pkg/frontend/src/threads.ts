// Discussion pane rendering: the hierarchical thread forest. Each comment is
// a bounded block with a header band (author, topic line, timestamp),
// indentation proportional to depth, and an obsolete badge linking to the
// version the comment anchored to.

import type { ThreadNode } from "./types.js";

export interface ThreadHandlers {
  onPoint: (node: ThreadNode, headerEl: HTMLElement) => void;
  onReply: (node: ThreadNode) => void;
  onShowVersion: (version: number) => void;
}

const INDENT_PX = 22;

export function renderThreads(
  container: HTMLElement,
  nodes: ThreadNode[],
  handlers: ThreadHandlers,
): Map<string, HTMLElement> {
  container.textContent = "";
  const headers = new Map<string, HTMLElement>();
  if (nodes.length === 0) {
    const empty = document.createElement("p");
    empty.className = "no-comments";
    empty.textContent = "No comments yet. Select text or comment on the whole document.";
    container.appendChild(empty);
    return headers;
  }
  const walk = (list: ThreadNode[]) => {
    for (const node of list) {
      container.appendChild(renderComment(node, handlers, headers));
      walk(node.replies);
    }
  };
  walk(nodes);
  return headers;
}

function renderComment(
  node: ThreadNode,
  handlers: ThreadHandlers,
  headers: Map<string, HTMLElement>,
): HTMLElement {
  const block = document.createElement("article");
  block.className = `comment pertinence-${node.pertinence}`;
  block.dataset.commentId = node.comment_id;
  block.style.marginLeft = `${node.depth * INDENT_PX}px`;

  const header = document.createElement("header");
  header.className = "comment-header";
  header.tabIndex = 0;
  const author = document.createElement("span");
  author.className = "comment-author";
  author.textContent = node.author_display_name;
  const topic = document.createElement("span");
  topic.className = "comment-topic";
  topic.textContent = node.header;
  const when = document.createElement("time");
  when.className = "comment-when";
  when.dateTime = node.created_at;
  when.textContent = node.created_at.replace("T", " ").slice(0, 19);
  header.append(author, topic, when);

  if (node.pertinence === "obsolete") {
    const badge = document.createElement("button");
    badge.type = "button";
    badge.className = "badge-obsolete";
    const version = node.obsolete_at_version;
    badge.textContent = `obsolete (references v${node.anchor.version_number ?? "?"})`;
    badge.title = version === null ? "obsolete" : `target text changed in version ${version}`;
    badge.addEventListener("click", (event) => {
      event.stopPropagation();
      if (node.anchor.version_number !== undefined) {
        handlers.onShowVersion(node.anchor.version_number);
      }
    });
    header.appendChild(badge);
  }

  header.addEventListener("click", () => handlers.onPoint(node, header));
  headers.set(node.comment_id, header);
  block.appendChild(header);

  if (node.excerpt !== null) {
    const excerpt = document.createElement("blockquote");
    excerpt.className = "comment-excerpt";
    excerpt.textContent = node.excerpt;
    block.appendChild(excerpt);
  }

  if (node.body) {
    const body = document.createElement("div");
    body.className = "comment-body";
    body.textContent = node.body;
    block.appendChild(body);
  }

  const actions = document.createElement("div");
  actions.className = "comment-actions";
  const reply = document.createElement("button");
  reply.type = "button";
  reply.className = "reply-button";
  reply.textContent = "reply";
  reply.addEventListener("click", (event) => {
    event.stopPropagation();
    handlers.onReply(node);
  });
  actions.appendChild(reply);
  block.appendChild(actions);

  return block;
}
