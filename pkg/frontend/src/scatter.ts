/** SVG scatter of correlator points.
 *
 * Pixel placement is presentation, so plain linear scaling is fine here;
 * the numbers a reader can see (tooltips, the r badge next to the plot)
 * all come verbatim from the response.
 */

export interface ScatterPoint {
  downloads: number;
  citations: number;
  label: string;
}

const PAD = 14;

function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function scatterSvg(
  points: readonly ScatterPoint[],
  width = 420,
  height = 260,
): string {
  const xs = points.map((p) => p.downloads);
  const ys = points.map((p) => p.citations);
  const xMin = Math.min(...xs, 0);
  const xMax = Math.max(...xs, 1);
  const yMin = Math.min(...ys, 0);
  const yMax = Math.max(...ys, 1);
  const sx = (x: number) =>
    PAD + ((x - xMin) / (xMax - xMin || 1)) * (width - 2 * PAD);
  const sy = (y: number) =>
    height - PAD - ((y - yMin) / (yMax - yMin || 1)) * (height - 2 * PAD);

  const circles = points
    .map(
      (p) =>
        `<circle cx="${sx(p.downloads).toFixed(1)}" cy="${sy(p.citations).toFixed(1)}" r="3">` +
        `<title>${escapeXml(p.label)}</title></circle>`,
    )
    .join("");
  return (
    `<svg viewBox="0 0 ${width} ${height}" role="img" class="scatter">` +
    `<line x1="${PAD}" y1="${height - PAD}" x2="${width - PAD}" y2="${height - PAD}"/>` +
    `<line x1="${PAD}" y1="${PAD}" x2="${PAD}" y2="${height - PAD}"/>` +
    circles +
    `</svg>`
  );
}
