/**
 * Density rule shared with the scene compiler: a density factor d in
 * (0, 1] keeps every stride-th sample, stride = max(1, round(1/d)),
 * plus the final sample. The fine glyph counts the service returns for
 * a given density follow exactly from this rule.
 *
 * round() here is round-half-to-even on the IEEE-754 quotient -- the
 * server rounds the same way, and quotients can land exactly on .5
 * (1/0.4 evaluates to 2.5), where half-up would disagree.
 */

export function strideForDensity(d: number): number {
  if (!(d > 0 && d <= 1)) {
    throw new RangeError(`density must be in (0, 1], got ${d}`);
  }
  const q = 1 / d;
  const floor = Math.floor(q);
  const frac = q - floor;
  let rounded: number;
  if (frac > 0.5) rounded = floor + 1;
  else if (frac < 0.5) rounded = floor;
  else rounded = floor % 2 === 0 ? floor : floor + 1;
  return Math.max(1, rounded);
}

/** Indices kept when thinning an n-sample track at density d. */
export function keptIndices(n: number, d: number): number[] {
  if (!Number.isInteger(n) || n < 1) {
    throw new RangeError(`sample count must be a positive integer, got ${n}`);
  }
  const stride = strideForDensity(d);
  const out: number[] = [];
  for (let i = 0; i < n; i += stride) out.push(i);
  if (out[out.length - 1] !== n - 1) out.push(n - 1);
  return out;
}

/** Number of samples kept when thinning an n-sample track at density d. */
export function keptCount(n: number, d: number): number {
  const stride = strideForDensity(d);
  const last = n - 1;
  const steps = Math.floor(last / stride);
  return steps * stride === last ? steps + 1 : steps + 2;
}
