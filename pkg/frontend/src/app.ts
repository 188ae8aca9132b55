/**
 * Application shell: wires the wizard and the report/what-if explorer to
 * the API. The API base defaults to the page origin and can be pointed
 * elsewhere with ?api=http://host:port.
 */

import { ApiClient } from './api.js';
import { renderReport } from './report_view.js';
import { SessionWizard } from './wizard.js';
import { WhatIfPanel } from './whatif.js';
import type { VariablesDoc } from './types.js';

function apiBase(): string {
  const param = new URLSearchParams(window.location.search).get('api');
  return param ?? window.location.origin;
}

async function startWizard(api: ApiClient, host: HTMLElement): Promise<void> {
  const namesRaw = window.prompt('Variable names (comma separated, elicitation order):', '');
  if (!namesRaw) return;
  const names = namesRaw.split(',').map((s) => s.trim()).filter(Boolean);
  const unit = window.prompt('Unit for all variables (blank for none):', '') ?? '';
  const integral = window.confirm('Are these count-valued variables?');
  const variables: VariablesDoc = {
    names,
    units: names.map(() => unit),
    integral: names.map(() => integral),
  };
  const first = names[0]!;
  const prevision = Number(window.prompt(`Prior prevision for ${first}:`, '0'));
  const variance = Number(window.prompt(`Prior variance for ${first}:`, '1'));
  const created = await api.createSession(variables, prevision, variance);
  const wizard = new SessionWizard(api, created.session_id, variables);

  const rerender = async () => {
    await wizard.refresh();
    wizard.render(host);
    const form = host.querySelector('form.question-form');
    form?.addEventListener('submit', async (event) => {
      event.preventDefault();
      const inputs = form.querySelectorAll<HTMLInputElement>('input');
      const previsions: string[] = [];
      let varianceValue = '';
      let priorValue = '';
      inputs.forEach((input) => {
        if (input.name.startsWith('prevision-')) previsions.push(input.value);
        else if (input.name === 'variance') varianceValue = input.value;
        else if (input.name === 'prior') priorValue = input.value;
      });
      const ok = await wizard.submit({ previsions, variance: varianceValue, prior: priorValue });
      if (ok) await rerender();
      else wizard.render(host);
    });
    host.querySelector('button.retry-button')?.addEventListener('click', rerender);
  };
  await rerender();
}

async function showReport(api: ApiClient, host: HTMLElement): Promise<void> {
  const reportId = window.prompt('Report id to load:', '');
  if (!reportId) return;
  const report = await api.getReport(reportId);
  const panel = new WhatIfPanel(api, reportId, report);

  const controls = document.createElement('div');
  controls.className = 'whatif-controls';
  const classInput = document.createElement('input');
  classInput.placeholder = 'class label';
  const variableInput = document.createElement('input');
  variableInput.placeholder = 'variable';
  const valueInput = document.createElement('input');
  valueInput.placeholder = 'correlation';
  valueInput.type = 'number';
  valueInput.step = 'any';
  const apply = document.createElement('button');
  apply.textContent = 'Apply what-if';
  const clear = document.createElement('button');
  clear.textContent = 'Clear overrides';
  controls.append(classInput, variableInput, valueInput, apply, clear);

  const reportHost = document.createElement('div');
  host.replaceChildren(controls, reportHost);
  renderReport(reportHost, panel.lastReport);

  apply.addEventListener('click', async () => {
    panel.setQuantityCorrelation(classInput.value, variableInput.value, Number(valueInput.value));
    await panel.recompute();
    renderReport(reportHost, panel.lastReport);
  });
  clear.addEventListener('click', () => {
    panel.clearOverrides();
    renderReport(reportHost, panel.lastReport);
  });
}

export function main(): void {
  const api = new ApiClient(apiBase());
  const app = document.getElementById('app');
  if (!app) return;
  const nav = document.createElement('nav');
  const elicitButton = document.createElement('button');
  elicitButton.textContent = 'Elicit a prior';
  const reportButton = document.createElement('button');
  reportButton.textContent = 'Explore a report';
  nav.append(elicitButton, reportButton);
  const host = document.createElement('main');
  app.replaceChildren(nav, host);
  elicitButton.addEventListener('click', () => void startWizard(api, host));
  reportButton.addEventListener('click', () => void showReport(api, host));
}

if (typeof window !== 'undefined' && typeof document !== 'undefined') {
  main();
}
