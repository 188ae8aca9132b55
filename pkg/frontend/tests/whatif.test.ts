import { describe, expect, it } from 'vitest';

import { ApiClient } from '../src/api.js';
import { renderReport } from '../src/report_view.js';
import { WhatIfPanel } from '../src/whatif.js';
import type { ReportDocument } from '../src/types.js';
import synthesis from './fixtures/synthesis.json';

const baseReport = synthesis.document as ReportDocument;
const reportId = synthesis.report_id as string;

function bumpedReport(): ReportDocument {
  // stand-in for the server's recomputation: South West resolution rises
  const copy = JSON.parse(JSON.stringify(baseReport)) as ReportDocument;
  const sw = copy.variables.names.indexOf('South West');
  copy.resolved_pct[sw] = copy.resolved_pct[sw]! + 7.9;
  copy.pba[sw] = copy.pba[sw]! + 1.25;
  delete copy.id;
  return copy;
}

function clientReturning(doc: ReportDocument, capture: { body?: unknown; calls: number }): ApiClient {
  return new ApiClient('http://api', async (_input, init) => {
    capture.calls += 1;
    capture.body = JSON.parse(String(init?.body));
    return new Response(JSON.stringify({ report_id: null, document: doc }), { status: 200 });
  });
}

describe('WhatIfPanel', () => {
  it('collects sparse overrides', () => {
    const panel = new WhatIfPanel(new ApiClient('http://x'), reportId, baseReport);
    expect(panel.hasOverrides).toBe(false);
    panel.setQuantityCorrelation('deep-gp', 'South West', 0.75);
    panel.setMeanShare('gmrf', 80);
    expect(panel.overrides).toEqual({
      corr_with_quantity: { 'deep-gp': { 'South West': 0.75 } },
      mean_pct: { gmrf: 80 },
    });
  });

  it('recompute posts the overrides and swaps the displayed report', async () => {
    const capture = { calls: 0 } as { body?: unknown; calls: number };
    const next = bumpedReport();
    const panel = new WhatIfPanel(clientReturning(next, capture), reportId, baseReport);
    panel.setQuantityCorrelation('deep-gp', 'South West', 0.75);
    await panel.recompute();
    expect(capture.calls).toBe(1);
    expect(capture.body).toEqual({
      report_id: reportId,
      overrides: { corr_with_quantity: { 'deep-gp': { 'South West': 0.75 } } },
    });
    expect(panel.lastReport).toEqual(next); // server payload round-trips through JSON
  });

  it('no pending overrides means no server call and the base report', async () => {
    const capture = { calls: 0 } as { body?: unknown; calls: number };
    const panel = new WhatIfPanel(clientReturning(bumpedReport(), capture), reportId, baseReport);
    await panel.recompute();
    expect(capture.calls).toBe(0);
    expect(panel.lastReport).toBe(baseReport);
  });

  it('clearing overrides restores the base report exactly', async () => {
    const panel = new WhatIfPanel(clientReturning(bumpedReport(), { calls: 0 }), reportId, baseReport);
    panel.setQuantityCorrelation('deep-gp', 'South West', 0.75);
    await panel.recompute();
    expect(panel.lastReport).not.toBe(baseReport);
    panel.clearOverrides();
    expect(panel.overrides).toEqual({});
    expect(panel.lastReport).toBe(baseReport); // same object, byte-for-byte the base
  });

  it('bands update in place without a page reload', async () => {
    const hostEl = document.createElement('div');
    document.body.replaceChildren(hostEl);
    renderReport(hostEl, baseReport);
    const sw = baseReport.variables.names.indexOf('South West');
    const before = hostEl.querySelector<SVGRectElement>(
      'rect[data-kind="resolved"][data-variable="South West"]',
    )!.dataset.value;

    const next = bumpedReport();
    const panel = new WhatIfPanel(clientReturning(next, { calls: 0 }), reportId, baseReport);
    panel.setQuantityCorrelation('deep-gp', 'South West', 0.75);
    await panel.recompute();
    renderReport(hostEl, panel.lastReport); // same container, no navigation
    const after = hostEl.querySelector<SVGRectElement>(
      'rect[data-kind="resolved"][data-variable="South West"]',
    )!.dataset.value;
    expect(Number(after)).toBeCloseTo(Number(before) + 7.9, 10);
    expect(Number(after)).toBe(next.resolved_pct[sw]);
  });
});
