/**
 * Report charts: per-variable uncertainty bands with model outputs, and
 * resolved-uncertainty bars.
 *
 * Every band endpoint, point and bar value comes straight from the report
 * document; the only client-side arithmetic is mapping values to pixels
 * and clipping the displayed lower band of count variables at zero.
 */

import { fmtPct, fmtValue } from './format.js';
import type { ReportDocument } from './types.js';

const SVG_NS = 'http://www.w3.org/2000/svg';

const WIDTH = 860;
const HEIGHT = 380;
const MARGIN = { top: 24, right: 16, bottom: 72, left: 64 };

interface Scale {
  (value: number): number;
}

function linearScale(domainMin: number, domainMax: number, rangeMin: number, rangeMax: number): Scale {
  const span = domainMax - domainMin || 1;
  return (value: number) => rangeMin + ((value - domainMin) / span) * (rangeMax - rangeMin);
}

function svgElement(width: number, height: number, className: string): SVGSVGElement {
  const svg = document.createElementNS(SVG_NS, 'svg');
  svg.setAttribute('width', String(width));
  svg.setAttribute('height', String(height));
  svg.setAttribute('viewBox', `0 0 ${width} ${height}`);
  svg.setAttribute('class', className);
  return svg;
}

function line(
  svg: SVGSVGElement, x1: number, y1: number, x2: number, y2: number,
  stroke: string, width: number, data?: Record<string, string>,
): SVGLineElement {
  const el = document.createElementNS(SVG_NS, 'line');
  el.setAttribute('x1', String(x1));
  el.setAttribute('y1', String(y1));
  el.setAttribute('x2', String(x2));
  el.setAttribute('y2', String(y2));
  el.setAttribute('stroke', stroke);
  el.setAttribute('stroke-width', String(width));
  for (const [k, v] of Object.entries(data ?? {})) el.dataset[k] = v;
  svg.appendChild(el);
  return el;
}

function text(svg: SVGSVGElement, x: number, y: number, content: string, size = 10, anchor = 'middle'): void {
  const el = document.createElementNS(SVG_NS, 'text');
  el.setAttribute('x', String(x));
  el.setAttribute('y', String(y));
  el.setAttribute('font-size', String(size));
  el.setAttribute('text-anchor', anchor);
  el.textContent = content;
  svg.appendChild(el);
}

/** Displayed lower edge of a band: count variables never show below zero. */
export function displayedLower(lower: number, integral: boolean): number {
  return integral ? Math.max(0, lower) : lower;
}

export function renderBandsChart(container: HTMLElement, report: ReportDocument): SVGSVGElement {
  const names = report.variables.names;
  const integral = report.variables.integral;
  const q = names.length;
  const svg = svgElement(WIDTH, HEIGHT, 'bands-chart');

  const shownValues: number[] = [];
  for (let i = 0; i < q; i++) {
    shownValues.push(
      displayedLower(report.prior_band.lower[i]!, integral[i]!),
      displayedLower(report.adjusted_band.lower[i]!, integral[i]!),
      report.prior_band.upper[i]!,
      report.adjusted_band.upper[i]!,
    );
    for (const outputs of Object.values(report.model_outputs)) {
      for (const out of outputs) shownValues.push(out.values[i]!);
    }
  }
  const yMin = Math.min(...shownValues);
  const yMax = Math.max(...shownValues);
  const pad = 0.05 * (yMax - yMin || 1);
  const y = linearScale(yMin - pad, yMax + pad, HEIGHT - MARGIN.bottom, MARGIN.top);
  const x = linearScale(0, q - 1 || 1, MARGIN.left + 30, WIDTH - MARGIN.right - 30);

  for (let i = 0; i < q; i++) {
    const cx = x(i);
    const isCount = integral[i]!;

    const priorLower = displayedLower(report.prior_band.lower[i]!, isCount);
    line(svg, cx - 8, y(priorLower), cx - 8, y(report.prior_band.upper[i]!), '#9a9a9a', 4, {
      kind: 'prior-band',
      variable: names[i]!,
      lower: String(priorLower),
      upper: String(report.prior_band.upper[i]!),
    });
    const priorDot = document.createElementNS(SVG_NS, 'circle');
    priorDot.setAttribute('cx', String(cx - 8));
    priorDot.setAttribute('cy', String(y(report.prior_prevision[i]!)));
    priorDot.setAttribute('r', '4');
    priorDot.setAttribute('fill', '#9a9a9a');
    svg.appendChild(priorDot);

    const adjustedLower = displayedLower(report.adjusted_band.lower[i]!, isCount);
    const clipped = adjustedLower !== report.adjusted_band.lower[i]!;
    line(svg, cx + 8, y(adjustedLower), cx + 8, y(report.adjusted_band.upper[i]!), '#2d6cb5', 4, {
      kind: 'adjusted-band',
      variable: names[i]!,
      lower: String(adjustedLower),
      upper: String(report.adjusted_band.upper[i]!),
      clipped: String(clipped),
    });
    const adjDot = document.createElementNS(SVG_NS, 'circle');
    adjDot.setAttribute('cx', String(cx + 8));
    adjDot.setAttribute('cy', String(y(report.pba[i]!)));
    adjDot.setAttribute('r', '4');
    adjDot.setAttribute('fill', '#2d6cb5');
    adjDot.dataset.kind = 'assessment';
    adjDot.dataset.variable = names[i]!;
    adjDot.dataset.value = String(report.pba[i]!);
    svg.appendChild(adjDot);

    for (const [label, outputs] of Object.entries(report.model_outputs)) {
      for (const out of outputs) {
        const dot = document.createElementNS(SVG_NS, 'circle');
        dot.setAttribute('cx', String(cx));
        dot.setAttribute('cy', String(y(out.values[i]!)));
        dot.setAttribute('r', '3');
        dot.setAttribute('fill', '#d05c2a');
        dot.dataset.kind = 'model-output';
        dot.dataset.model = out.model_id;
        dot.dataset.class = label;
        dot.dataset.variable = names[i]!;
        dot.dataset.value = String(out.values[i]!);
        const tooltip = document.createElementNS(SVG_NS, 'title');
        tooltip.textContent = `${out.model_id} (${label}) ${names[i]}: ${fmtValue(out.values[i]!)}`;
        dot.appendChild(tooltip);
        svg.appendChild(dot);
      }
    }
    text(svg, cx, HEIGHT - MARGIN.bottom + 34, names[i]!, 10);
  }
  if (yMin - pad < 0 && 0 < yMax + pad) {
    line(svg, MARGIN.left, y(0), WIDTH - MARGIN.right, y(0), '#dddddd', 1, { kind: 'zero-line' });
  }
  text(svg, MARGIN.left, 14, 'prior (grey) and adjusted (blue) bands at two standard deviations; dots are model outputs', 11, 'start');
  container.replaceChildren(svg);
  return svg;
}

export function renderResolutionBars(container: HTMLElement, report: ReportDocument): SVGSVGElement {
  const names = report.variables.names;
  const q = names.length;
  const svg = svgElement(WIDTH, 240, 'resolution-chart');
  const y = linearScale(0, 100, 240 - 48, 18);
  const x = linearScale(0, q - 1 || 1, MARGIN.left + 30, WIDTH - MARGIN.right - 30);

  for (let i = 0; i < q; i++) {
    const cx = x(i);
    const ru = report.resolved_pct[i]!;
    const mru = report.max_resolvable_pct[i]!;
    const mruBar = document.createElementNS(SVG_NS, 'rect');
    mruBar.setAttribute('x', String(cx - 14));
    mruBar.setAttribute('y', String(y(mru)));
    mruBar.setAttribute('width', '12');
    mruBar.setAttribute('height', String(y(0) - y(mru)));
    mruBar.setAttribute('fill', '#e3a24c');
    mruBar.dataset.kind = 'max-resolvable';
    mruBar.dataset.variable = names[i]!;
    mruBar.dataset.value = String(mru);
    svg.appendChild(mruBar);
    const ruBar = document.createElementNS(SVG_NS, 'rect');
    ruBar.setAttribute('x', String(cx + 2));
    ruBar.setAttribute('y', String(y(ru)));
    ruBar.setAttribute('width', '12');
    ruBar.setAttribute('height', String(y(0) - y(ru)));
    ruBar.setAttribute('fill', '#2d6cb5');
    ruBar.dataset.kind = 'resolved';
    ruBar.dataset.variable = names[i]!;
    ruBar.dataset.value = String(ru);
    svg.appendChild(ruBar);
    text(svg, cx, y(Math.max(ru, mru)) - 6, fmtPct(ru), 9);
    text(svg, cx, 240 - 18, names[i]!, 10);
  }
  text(svg, MARGIN.left, 12, 'resolved % (blue) against maximum resolvable % (orange)', 11, 'start');
  container.replaceChildren(svg);
  return svg;
}
