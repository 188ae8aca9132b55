/**
 * Display formatting. This is the only arithmetic the client performs on
 * API numbers: rounding them for presentation.
 */

import type { Hypothetical, QuestionPrompt, VariablesDoc } from './types.js';

/** Fixed two-decimal display used for belief values. */
export function fmtValue(x: number): string {
  return x.toFixed(2);
}

/** One-decimal display used for percentages. */
export function fmtPct(x: number): string {
  return `${x.toFixed(1)}%`;
}

/** Hypothetical values render at their display precision (integers for counts). */
export function fmtHypothetical(x: number): string {
  return Number.isInteger(x) ? x.toFixed(0) : String(x);
}

/** "London=500, South East=238" */
export function conditioningText(conditioning: Hypothetical[]): string {
  return conditioning.map((h) => `${h.variable}=${fmtHypothetical(h.display)}`).join(', ');
}

function withUnit(count: string, unit: string): string {
  return unit ? `${count} ${unit}` : count;
}

/**
 * Natural-language question for one conditional prevision, generated from
 * variable labels and units.
 */
export function previsionQuestion(
  target: string,
  conditioning: Hypothetical[],
  variables: VariablesDoc,
): string {
  const unitOf = (name: string) => variables.units[variables.names.indexOf(name)] ?? '';
  const given = conditioning
    .map((h) => `${withUnit(fmtHypothetical(h.display), unitOf(h.variable))} in ${h.variable}`)
    .join(' and ');
  const unit = unitOf(target);
  const what = unit ? `how many ${unit} do you expect` : 'what value do you expect';
  return `Given ${given}, ${what} in ${target}?`;
}

export function varianceQuestion(target: string, conditioning: Hypothetical[]): string {
  const given = conditioningText(conditioning);
  return `Given ${given}, what is your conditional variance for ${target}?`;
}

export function priorQuestion(target: string): string {
  return `Before seeing anything, what is your prior prevision for ${target}?`;
}

/** Title line of a question screen. */
export function promptTitle(prompt: QuestionPrompt): string {
  if (prompt.kind === 'finalize') {
    return 'All variables elicited — supply marginal variances to finalize.';
  }
  return `Judgements for ${prompt.variable}`;
}
