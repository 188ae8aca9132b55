/**
 * SVG heatmap of the growing covariance (or correlation) matrix.
 *
 * The color scale is fixed once per session (from the first-variable
 * variance) rather than rescaled per step, so covariances are seen to grow
 * on a stable scale.
 */

const SVG_NS = 'http://www.w3.org/2000/svg';

export interface HeatmapOptions {
  /** fixed color-scale magnitude for the whole session */
  scaleMax: number;
  cellSize?: number;
  title?: string;
}

function cellColor(value: number, scaleMax: number): string {
  const t = Math.max(-1, Math.min(1, scaleMax > 0 ? value / scaleMax : 0));
  // blue (negative) .. white (zero) .. red (positive)
  const other = Math.round(255 * (1 - Math.abs(t)));
  return t >= 0 ? `rgb(255,${other},${other})` : `rgb(${other},${other},255)`;
}

export function renderHeatmap(
  container: HTMLElement,
  matrix: number[][],
  labels: string[],
  options: HeatmapOptions,
): SVGSVGElement {
  const cell = options.cellSize ?? 34;
  const margin = 90;
  const n = matrix.length;
  const svg = document.createElementNS(SVG_NS, 'svg');
  svg.setAttribute('class', 'heatmap');
  svg.setAttribute('width', String(margin + n * cell + 10));
  svg.setAttribute('height', String(margin + n * cell + 10));
  svg.dataset.scaleMax = String(options.scaleMax);

  for (let i = 0; i < n; i++) {
    const row = matrix[i]!;
    for (let j = 0; j < row.length; j++) {
      const value = row[j]!;
      const rect = document.createElementNS(SVG_NS, 'rect');
      rect.setAttribute('x', String(margin + j * cell));
      rect.setAttribute('y', String(margin + i * cell));
      rect.setAttribute('width', String(cell - 1));
      rect.setAttribute('height', String(cell - 1));
      rect.setAttribute('fill', cellColor(value, options.scaleMax));
      rect.dataset.row = labels[i] ?? String(i);
      rect.dataset.col = labels[j] ?? String(j);
      rect.dataset.value = String(value);
      const tooltip = document.createElementNS(SVG_NS, 'title');
      tooltip.textContent = `${labels[i]} x ${labels[j]}: ${value}`;
      rect.appendChild(tooltip);
      svg.appendChild(rect);
    }
  }
  labels.forEach((label, i) => {
    const rowText = document.createElementNS(SVG_NS, 'text');
    rowText.setAttribute('x', String(margin - 6));
    rowText.setAttribute('y', String(margin + i * cell + cell / 2 + 4));
    rowText.setAttribute('text-anchor', 'end');
    rowText.setAttribute('font-size', '10');
    rowText.textContent = label;
    svg.appendChild(rowText);
    const colText = document.createElementNS(SVG_NS, 'text');
    colText.setAttribute('x', String(margin + i * cell + cell / 2));
    colText.setAttribute('y', String(margin - 6));
    colText.setAttribute('text-anchor', 'start');
    colText.setAttribute('font-size', '10');
    colText.setAttribute(
      'transform',
      `rotate(-45 ${margin + i * cell + cell / 2} ${margin - 6})`,
    );
    colText.textContent = label;
    svg.appendChild(colText);
  });
  container.replaceChildren(svg);
  return svg;
}
