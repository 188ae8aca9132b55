/**
 * Report screen: the synthesis table plus the band and resolution charts.
 * Every cell is a formatted API field.
 */

import { renderBandsChart, renderResolutionBars } from './charts.js';
import { fmtPct, fmtValue } from './format.js';
import type { ReportDocument } from './types.js';

interface Row {
  label: string;
  values: number[];
  kind: 'value' | 'pct';
}

export function reportRows(report: ReportDocument): Row[] {
  const rows: Row[] = [];
  report.class_labels.forEach((label, i) => {
    rows.push({
      label: `adjusted mean [${label}]`,
      values: report.adjusted_class_means[i]!,
      kind: 'value',
    });
  });
  rows.push({ label: 'assessment', values: report.pba, kind: 'value' });
  rows.push({ label: 'adjusted variance', values: report.adjusted_var_diag, kind: 'value' });
  rows.push({ label: 'prior variance', values: report.prior_var_diag, kind: 'value' });
  rows.push({ label: 'discrepancy variance', values: report.weights.var_u_diag, kind: 'value' });
  rows.push({ label: 'resolved %', values: report.resolved_pct, kind: 'pct' });
  rows.push({ label: 'max resolvable %', values: report.max_resolvable_pct, kind: 'pct' });
  return rows;
}

export function renderReport(container: HTMLElement, report: ReportDocument): void {
  container.replaceChildren();

  const table = document.createElement('table');
  table.className = 'report-table';
  const head = document.createElement('tr');
  head.appendChild(document.createElement('th'));
  for (const name of report.variables.names) {
    const th = document.createElement('th');
    th.textContent = name;
    head.appendChild(th);
  }
  table.appendChild(head);

  for (const row of reportRows(report)) {
    const tr = document.createElement('tr');
    const th = document.createElement('th');
    th.textContent = row.label;
    tr.appendChild(th);
    row.values.forEach((value, i) => {
      const td = document.createElement('td');
      td.textContent = row.kind === 'pct' ? fmtPct(value) : fmtValue(value);
      td.dataset.row = row.label;
      td.dataset.variable = report.variables.names[i]!;
      td.dataset.raw = String(value);
      tr.appendChild(td);
    });
    table.appendChild(tr);
  }
  container.appendChild(table);

  const bands = document.createElement('div');
  bands.className = 'chart-host bands-host';
  container.appendChild(bands);
  renderBandsChart(bands, report);

  const resolution = document.createElement('div');
  resolution.className = 'chart-host resolution-host';
  container.appendChild(resolution);
  renderResolutionBars(resolution, report);
}
