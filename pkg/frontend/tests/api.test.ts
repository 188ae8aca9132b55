import { describe, expect, it } from 'vitest';

import { ApiClient, ApiError, NetworkError } from '../src/api.js';

function fakeFetch(status: number, body: unknown) {
  return async () =>
    new Response(JSON.stringify(body), {
      status,
      headers: { 'content-type': 'application/json' },
    });
}

describe('ApiClient', () => {
  it('returns parsed payloads', async () => {
    const api = new ApiClient('http://x', fakeFetch(200, { name: 'pba-workbench', version: '0' }));
    expect((await api.health()).name).toBe('pba-workbench');
  });

  it('surfaces error code and incoherence margin', async () => {
    const api = new ApiClient(
      'http://x',
      fakeFetch(422, {
        code: 'incoherent_step',
        message: 'answers break positive definiteness',
        detail: { margin: -1.5e-9 },
      }),
    );
    const err = await api
      .submitAnswers('s', { conditional_previsions: [1], conditional_variance: 1, prior_prevision: 0 })
      .catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect((err as ApiError).code).toBe('incoherent_step');
    expect((err as ApiError).status).toBe(422);
    expect((err as ApiError).margin).toBeCloseTo(-1.5e-9);
  });

  it('wraps connection failures as NetworkError', async () => {
    const api = new ApiClient('http://x', async () => {
      throw new TypeError('fetch failed');
    });
    const err = await api.nextQuestion('s').catch((e: unknown) => e);
    expect(err).toBeInstanceOf(NetworkError);
  });

  it('sends the save flag on what-if persistence', async () => {
    let captured = '';
    const api = new ApiClient('http://x', async (input) => {
      captured = input;
      return new Response(JSON.stringify({ report_id: null, document: {} }), { status: 200 });
    });
    await api.whatIf('r1', {}, true);
    expect(captured).toBe('http://x/v1/whatif?save=true');
  });
});
