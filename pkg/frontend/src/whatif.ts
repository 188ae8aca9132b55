/**
 * What-if panel: sparse edits to the elicited judgements, recomputed
 * server-side. Clearing the pending overrides restores the base report
 * exactly - the base document is kept untouched and re-used by reference.
 */

import { ApiClient } from './api.js';
import type { Overrides, ReportDocument } from './types.js';

export class WhatIfPanel {
  overrides: Overrides = {};
  lastReport: ReportDocument;

  constructor(
    private readonly api: ApiClient,
    readonly baseReportId: string,
    readonly baseReport: ReportDocument,
  ) {
    this.lastReport = baseReport;
  }

  get hasOverrides(): boolean {
    return Object.values(this.overrides).some((group) => Object.keys(group).length > 0);
  }

  setQuantityCorrelation(classLabel: string, variable: string, value: number): void {
    const group = (this.overrides.corr_with_quantity ??= {});
    (group[classLabel] ??= {})[variable] = value;
  }

  setCrossClassCorrelation(pairKey: string, variable: string, value: number): void {
    const group = (this.overrides.cross_class_corr ??= {});
    (group[pairKey] ??= {})[variable] = value;
  }

  setMeanShare(classLabel: string, pct: number): void {
    (this.overrides.mean_pct ??= {})[classLabel] = pct;
  }

  setResidualShare(classLabel: string, pct: number): void {
    (this.overrides.resid_pct ??= {})[classLabel] = pct;
  }

  /** Drop all pending edits; the displayed report is the base again. */
  clearOverrides(): void {
    this.overrides = {};
    this.lastReport = this.baseReport;
  }

  /** Recompute on the server; never persists unless asked to save. */
  async recompute(save = false): Promise<ReportDocument> {
    if (!this.hasOverrides) {
      this.lastReport = this.baseReport;
      return this.lastReport;
    }
    const resp = await this.api.whatIf(this.baseReportId, this.overrides, save);
    this.lastReport = resp.document;
    return this.lastReport;
  }
}
