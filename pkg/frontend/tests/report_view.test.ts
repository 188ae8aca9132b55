import { describe, expect, it } from 'vitest';

import { fmtPct, fmtValue } from '../src/format.js';
import { renderReport, reportRows } from '../src/report_view.js';
import type { ReportDocument } from '../src/types.js';
import synthesis from './fixtures/synthesis.json';

const report = synthesis.document as ReportDocument;

function host(): HTMLElement {
  const el = document.createElement('div');
  document.body.replaceChildren(el);
  return el;
}

describe('report table', () => {
  it('displays every number equal to its API field at displayed precision', () => {
    const el = host();
    renderReport(el, report);
    const cells = el.querySelectorAll<HTMLTableCellElement>('td[data-row]');
    expect(cells.length).toBe(reportRows(report).length * report.variables.names.length);
    for (const cell of cells) {
      const raw = Number(cell.dataset.raw);
      const expected = cell.dataset.row!.endsWith('%') ? fmtPct(raw) : fmtValue(raw);
      expect(cell.textContent).toBe(expected);
    }
  });

  it('covers the assessment row with the published-scale values', () => {
    const el = host();
    renderReport(el, report);
    const assessment = el.querySelectorAll<HTMLTableCellElement>('td[data-row="assessment"]');
    const texts = [...assessment].map((c) => c.textContent);
    expect(texts).toEqual(report.pba.map((v) => fmtValue(v)));
  });

  it('renders both charts beneath the table', () => {
    const el = host();
    renderReport(el, report);
    expect(el.querySelector('.bands-host svg.bands-chart')).not.toBeNull();
    expect(el.querySelector('.resolution-host svg.resolution-chart')).not.toBeNull();
  });
});
