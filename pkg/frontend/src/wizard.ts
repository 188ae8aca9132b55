/**
 * Elicitation wizard: asks the next conditional-prevision question, shows
 * the growing covariance matrix, and never loses an entered answer.
 *
 * All state is derived from the last API response; entered-but-unsubmitted
 * values live in the inputs and the draft store only.
 */

import { ApiClient, ApiError, NetworkError } from './api.js';
import { DraftStore, type AnswerDraft } from './drafts.js';
import {
  conditioningText,
  fmtValue,
  previsionQuestion,
  priorQuestion,
  promptTitle,
  varianceQuestion,
} from './format.js';
import { renderHeatmap } from './heatmap.js';
import type { QuestionPrompt, SessionSummary, VariablesDoc } from './types.js';

export interface WizardNotice {
  kind: 'incoherent' | 'network' | 'validation';
  message: string;
  margin?: number;
}

export class SessionWizard {
  prompt: QuestionPrompt | null = null;
  summary: SessionSummary | null = null;
  notice: WizardNotice | null = null;
  /** fixed heatmap color scale for the whole session */
  private scaleMax: number | null = null;

  constructor(
    private readonly api: ApiClient,
    readonly sessionId: string,
    readonly variables: VariablesDoc,
    private readonly drafts: DraftStore = new DraftStore(),
  ) {}

  async refresh(): Promise<void> {
    try {
      this.summary = await this.api.getSession(this.sessionId);
      if (this.scaleMax === null) {
        this.scaleMax = Math.abs(this.summary.u[0]?.[0] ?? 1);
      }
      if (this.summary.status === 'finalized') {
        this.prompt = null;
        return;
      }
      this.prompt = await this.api.nextQuestion(this.sessionId);
      this.notice = null;
    } catch (err) {
      if (err instanceof NetworkError) {
        this.notice = { kind: 'network', message: `Connection failed: ${err.message}. Retry.` };
        return;
      }
      if (err instanceof ApiError && err.status === 409) {
        this.prompt = null;
        return;
      }
      throw err;
    }
  }

  draft(variable: string): AnswerDraft | null {
    return this.drafts.load(this.sessionId, variable);
  }

  saveDraft(variable: string, draft: AnswerDraft): void {
    this.drafts.save(this.sessionId, variable, draft);
  }

  /**
   * Submit the entered answers. Returns true when accepted; on rejection or
   * network failure the draft is retained and a notice is set.
   */
  async submit(draft: AnswerDraft): Promise<boolean> {
    const variable = this.prompt?.variable;
    if (!variable) return false;
    this.saveDraft(variable, draft);
    try {
      this.summary = await this.api.submitAnswers(this.sessionId, {
        conditional_previsions: draft.previsions.map(Number),
        conditional_variance: Number(draft.variance),
        prior_prevision: Number(draft.prior),
      });
      this.drafts.clear(this.sessionId, variable);
      this.prompt = await this.api.nextQuestion(this.sessionId);
      this.notice = null;
      return true;
    } catch (err) {
      if (err instanceof ApiError) {
        this.notice = {
          kind: err.code === 'incoherent_step' ? 'incoherent' : 'validation',
          message: err.message,
          margin: err.margin,
        };
        return false;
      }
      if (err instanceof NetworkError) {
        this.notice = {
          kind: 'network',
          message: `Submission failed: ${err.message}. Your answers are kept; retry.`,
        };
        return false;
      }
      throw err;
    }
  }

  render(container: HTMLElement): void {
    container.replaceChildren();
    if (this.notice?.kind === 'network') {
      const banner = document.createElement('div');
      banner.className = 'banner banner-retry';
      banner.textContent = this.notice.message;
      const retry = document.createElement('button');
      retry.textContent = 'Retry';
      retry.className = 'retry-button';
      banner.appendChild(retry);
      container.appendChild(banner);
    }
    if (this.summary?.status === 'finalized' || (this.summary && !this.prompt && !this.notice)) {
      this.renderFinalized(container);
      return;
    }
    if (this.prompt) this.renderQuestion(container, this.prompt);
    if (this.summary && this.summary.u.length > 0) {
      const section = document.createElement('section');
      section.className = 'matrix-panel';
      const heading = document.createElement('h3');
      heading.textContent = 'Covariance so far';
      section.appendChild(heading);
      const host = document.createElement('div');
      section.appendChild(host);
      renderHeatmap(
        host,
        this.summary.u,
        this.summary.variables.slice(0, this.summary.elicited),
        { scaleMax: this.scaleMax ?? 1 },
      );
      container.appendChild(section);
    }
  }

  private renderQuestion(container: HTMLElement, prompt: QuestionPrompt): void {
    const form = document.createElement('form');
    form.className = 'question-form';
    const title = document.createElement('h2');
    title.textContent = promptTitle(prompt);
    form.appendChild(title);

    if (prompt.kind === 'finalize') {
      const note = document.createElement('p');
      note.textContent = prompt.statement;
      form.appendChild(note);
      container.appendChild(form);
      return;
    }

    const variable = prompt.variable!;
    const saved = this.draft(variable);
    const conditioning = document.createElement('p');
    conditioning.className = 'conditioning';
    conditioning.textContent = `Hypothetical values so far: ${conditioningText(prompt.conditioning)}`;
    form.appendChild(conditioning);

    if (this.notice && this.notice.kind !== 'network') {
      const inline = document.createElement('p');
      inline.className = 'error-inline';
      inline.textContent =
        this.notice.margin !== undefined
          ? `${this.notice.message} (margin ${this.notice.margin.toExponential(2)})`
          : this.notice.message;
      form.appendChild(inline);
    }

    for (let j = 0; j < prompt.previsions_required; j++) {
      const label = document.createElement('label');
      label.textContent = previsionQuestion(
        variable,
        prompt.conditioning.slice(0, j + 1),
        this.variables,
      );
      const input = document.createElement('input');
      input.type = 'number';
      input.step = 'any';
      input.name = `prevision-${j}`;
      input.value = saved?.previsions[j] ?? '';
      label.appendChild(input);
      form.appendChild(label);
    }
    const varianceLabel = document.createElement('label');
    varianceLabel.textContent = varianceQuestion(variable, prompt.conditioning);
    const varianceInput = document.createElement('input');
    varianceInput.type = 'number';
    varianceInput.step = 'any';
    varianceInput.name = 'variance';
    varianceInput.value = saved?.variance ?? '';
    varianceLabel.appendChild(varianceInput);
    form.appendChild(varianceLabel);

    const priorLabel = document.createElement('label');
    priorLabel.textContent = priorQuestion(variable);
    const priorInput = document.createElement('input');
    priorInput.type = 'number';
    priorInput.step = 'any';
    priorInput.name = 'prior';
    priorInput.value = saved?.prior ?? '';
    priorLabel.appendChild(priorInput);
    form.appendChild(priorLabel);

    const submit = document.createElement('button');
    submit.type = 'submit';
    submit.textContent = `Submit judgements for ${variable}`;
    form.appendChild(submit);
    container.appendChild(form);
  }

  private renderFinalized(container: HTMLElement): void {
    const summary = this.summary!;
    const panel = document.createElement('section');
    panel.className = 'finalized-panel';
    const heading = document.createElement('h2');
    heading.textContent = 'Session finalized';
    panel.appendChild(heading);
    const elicited = summary.variables.slice(0, summary.elicited);
    const previsions = document.createElement('p');
    previsions.textContent = elicited
      .map((name, i) => `${name}: ${fmtValue(summary.prior_previsions[i]!)}`)
      .join('; ');
    panel.appendChild(previsions);
    const host = document.createElement('div');
    panel.appendChild(host);
    renderHeatmap(host, summary.correlation, elicited, { scaleMax: 1 });
    container.appendChild(panel);
  }
}
