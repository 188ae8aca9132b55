/**
 * Types mirroring the /v1 API payloads.
 *
 * The UI never does belief math: every number it shows is one of these
 * fields, possibly rounded for display.
 */

export interface VariablesDoc {
  names: string[];
  units: string[];
  integral: boolean[];
}

export interface Hypothetical {
  variable: string;
  display: number;
  exact: number;
}

export interface QuestionPrompt {
  kind: 'answers' | 'finalize';
  variable: string | null;
  conditioning: Hypothetical[];
  previsions_required: number;
  variance_required: boolean;
  statement: string;
}

export interface SessionSummary {
  session_id: string;
  status: 'in-progress' | 'finalized';
  elicited: number;
  total: number;
  variables: string[];
  u: number[][];
  correlation: number[][];
  hypotheticals: Hypothetical[];
  prior_previsions: number[];
  last_step?: {
    variable: string;
    g: number[];
    variance: number;
  };
}

export interface AnswersRequest {
  conditional_previsions: number[];
  conditional_variance: number;
  prior_prevision: number;
}

export interface Band {
  lower: number[];
  upper: number[];
}

export interface ModelOutputEntry {
  model_id: string;
  values: number[];
}

export interface ReportDocument {
  schema_version: number;
  kind: 'report';
  id?: string;
  inputs: Record<string, unknown>;
  variables: VariablesDoc;
  class_labels: string[];
  zbar: number[][];
  adjusted_class_means: number[][];
  pba: number[];
  prior_band: Band;
  adjusted_band: Band;
  adjusted_var: number[][];
  adjusted_var_diag: number[];
  resolved_pct: number[];
  max_resolvable_pct: number[];
  prior_prevision: number[];
  prior_var_diag: number[];
  weights: {
    a_blocks: number[][][];
    prevision_u: number[];
    var_u: number[][];
    var_u_diag: number[];
  };
  model_outputs: Record<string, ModelOutputEntry[]>;
}

export interface SynthesisResponse {
  report_id: string;
  sha256: string;
  document: ReportDocument;
}

export interface WhatIfResponse {
  report_id: string | null;
  document: ReportDocument;
}

/** Sparse judgement edits accepted by POST /v1/whatif. */
export interface Overrides {
  corr_with_quantity?: Record<string, Record<string, number>>;
  cross_class_corr?: Record<string, Record<string, number>>;
  mean_pct?: Record<string, number>;
  resid_pct?: Record<string, number>;
}

export interface ApiErrorBody {
  code: string;
  message: string;
  detail?: { margin?: number } & Record<string, unknown>;
}
