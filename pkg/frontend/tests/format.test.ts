import { describe, expect, it } from 'vitest';

import {
  conditioningText,
  fmtHypothetical,
  fmtPct,
  fmtValue,
  previsionQuestion,
  promptTitle,
} from '../src/format.js';
import type { QuestionPrompt } from '../src/types.js';
import session from './fixtures/session.json';

const firstPrompt = session.first_prompt as QuestionPrompt;
const secondPrompt = session.second_prompt as QuestionPrompt;

describe('number formatting', () => {
  it('belief values show two decimals', () => {
    expect(fmtValue(1125.0123)).toBe('1125.01');
    expect(fmtValue(-62.636)).toBe('-62.64');
  });

  it('percentages show one decimal', () => {
    expect(fmtPct(79.68249)).toBe('79.7%');
  });

  it('hypothetical displays keep integers whole', () => {
    expect(fmtHypothetical(500)).toBe('500');
    expect(fmtHypothetical(238)).toBe('238');
    expect(fmtHypothetical(237.5)).toBe('237.5');
  });
});

describe('question text', () => {
  it('renders the first conditioning hypothetical', () => {
    expect(conditioningText(firstPrompt.conditioning)).toBe('London=500');
    const q = previsionQuestion('South East', firstPrompt.conditioning, {
      names: ['London', 'South East'],
      units: ['cases', 'cases'],
      integral: [true, true],
    });
    expect(q).toBe('Given 500 cases in London, how many cases do you expect in South East?');
  });

  it('renders the 500/238 sequence after the first answer', () => {
    expect(conditioningText(secondPrompt.conditioning)).toBe('London=500, South East=238');
  });

  it('titles name the target variable', () => {
    expect(promptTitle(secondPrompt)).toBe('Judgements for North West');
  });
});
