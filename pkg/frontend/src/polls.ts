// Poll widgets: question, rule summary, live tally, outcome, vote buttons.

import type { PollView, VoteChoice } from "./types.js";

export interface PollHandlers {
  onVote: (pollId: string, choice: VoteChoice) => void;
  onClose: (pollId: string) => void;
}

const CHOICES: VoteChoice[] = ["yes", "no", "abstain"];

export function renderPolls(
  container: HTMLElement,
  polls: PollView[],
  handlers: PollHandlers,
): void {
  container.textContent = "";
  if (polls.length === 0) return;
  const heading = document.createElement("h3");
  heading.textContent = "Polls";
  container.appendChild(heading);
  for (const poll of polls) {
    container.appendChild(renderPoll(poll, handlers));
  }
}

function describeRule(poll: PollView): string {
  const { rule } = poll;
  const parts: string[] = [];
  parts.push(rule.kind === "supermajority" ? `supermajority ≥ ${rule.threshold}` : rule.kind);
  if (rule.quorum !== "0") parts.push(`quorum ${rule.quorum}`);
  parts.push(`on v${poll.version_number}`);
  return parts.join(", ");
}

function renderPoll(poll: PollView, handlers: PollHandlers): HTMLElement {
  const card = document.createElement("section");
  card.className = `poll poll-${poll.status}`;
  card.dataset.pollId = poll.poll_id;

  const question = document.createElement("div");
  question.className = "poll-question";
  question.textContent = poll.question;
  const rule = document.createElement("div");
  rule.className = "poll-rule";
  rule.textContent = describeRule(poll);
  const tally = document.createElement("div");
  tally.className = "poll-tally";
  tally.textContent =
    `yes ${poll.tally.yes} · no ${poll.tally.no} · abstain ${poll.tally.abstain}` +
    ` (${poll.tally.cast}/${poll.tally.eligible_count} cast)`;
  const outcome = document.createElement("div");
  outcome.className = `poll-outcome outcome-${poll.outcome}`;
  outcome.textContent = `${poll.status === "closed" ? "final" : "live"}: ${poll.outcome}`;
  card.append(question, rule, tally, outcome);

  if (poll.status === "open") {
    const buttons = document.createElement("div");
    buttons.className = "poll-buttons";
    for (const choice of CHOICES) {
      const button = document.createElement("button");
      button.type = "button";
      button.className = `vote-${choice}`;
      button.textContent = choice;
      button.addEventListener("click", () => handlers.onVote(poll.poll_id, choice));
      buttons.appendChild(button);
    }
    const close = document.createElement("button");
    close.type = "button";
    close.className = "poll-close";
    close.textContent = "close poll";
    close.addEventListener("click", () => handlers.onClose(poll.poll_id));
    buttons.appendChild(close);
    card.appendChild(buttons);
  }
  return card;
}
