/**
 * Typed client for the /v1 HTTP API.
 *
 * Errors become ApiError (carrying the machine-readable code and any
 * incoherence margin); network-level failures surface as NetworkError so
 * views can show a retry banner without losing entered answers.
 */

import type {
  AnswersRequest,
  ApiErrorBody,
  Overrides,
  QuestionPrompt,
  ReportDocument,
  SessionSummary,
  SynthesisResponse,
  VariablesDoc,
  WhatIfResponse,
} from './types.js';

export class ApiError extends Error {
  readonly code: string;
  readonly status: number;
  readonly margin?: number;

  constructor(status: number, body: ApiErrorBody) {
    super(body.message);
    this.code = body.code;
    this.status = status;
    this.margin = body.detail?.margin;
  }
}

export class NetworkError extends Error {}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    let resp: Response;
    try {
      resp = await this.fetchImpl(`${this.baseUrl}/v1${path}`, {
        method,
        headers: body === undefined ? undefined : { 'content-type': 'application/json' },
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (err) {
      throw new NetworkError(err instanceof Error ? err.message : String(err));
    }
    if (!resp.ok) {
      let parsed: ApiErrorBody;
      try {
        parsed = (await resp.json()) as ApiErrorBody;
      } catch {
        parsed = { code: 'unknown', message: `HTTP ${resp.status}` };
      }
      throw new ApiError(resp.status, parsed);
    }
    return (await resp.json()) as T;
  }

  health(): Promise<{ name: string; version: string }> {
    return this.request('GET', '/health');
  }

  createSession(
    variables: VariablesDoc,
    firstPrevision: number,
    firstVariance: number,
    multiplier = 0.5,
  ): Promise<{ session_id: string }> {
    return this.request('POST', '/sessions', {
      variables,
      first_prevision: firstPrevision,
      first_variance: firstVariance,
      policy: { multiplier },
    });
  }

  getSession(sessionId: string): Promise<SessionSummary> {
    return this.request('GET', `/sessions/${sessionId}`);
  }

  nextQuestion(sessionId: string): Promise<QuestionPrompt> {
    return this.request('GET', `/sessions/${sessionId}/next`);
  }

  submitAnswers(sessionId: string, answers: AnswersRequest): Promise<SessionSummary> {
    return this.request('POST', `/sessions/${sessionId}/answers`, answers);
  }

  finalizeSession(
    sessionId: string,
    marginalVariances: number[],
  ): Promise<{ prior_id: string; sha256: string; document: unknown }> {
    return this.request('POST', `/sessions/${sessionId}/finalize`, {
      marginal_variances: marginalVariances,
    });
  }

  synthesize(priorId: string, classId: string, batchId: string): Promise<SynthesisResponse> {
    return this.request('POST', '/synthesis', {
      prior_id: priorId,
      class_id: classId,
      batch_id: batchId,
    });
  }

  whatIf(reportId: string, overrides: Overrides, save = false): Promise<WhatIfResponse> {
    return this.request('POST', `/whatif${save ? '?save=true' : ''}`, {
      report_id: reportId,
      overrides,
    });
  }

  getReport(reportId: string): Promise<ReportDocument> {
    return this.request('GET', `/reports/${reportId}`);
  }
}
