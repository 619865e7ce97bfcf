/**
 * Least-squares polynomial fits via the normal equations.
 *
 * Coefficients are returned highest degree first, matching the simulator's
 * fit report, so the two independently computed fits can be compared
 * coefficient by coefficient.
 */

export interface PolynomialFit {
  degree: number;
  /** Highest degree first: y = c[0]*x^d + ... + c[d]. */
  coefficients: number[];
  rss: number;
  r2: number;
}

function solve(matrix: number[][], rhs: number[]): number[] {
  // Gaussian elimination with partial pivoting on a small dense system.
  const size = rhs.length;
  const a = matrix.map((row, i) => [...row, rhs[i]]);
  for (let col = 0; col < size; col++) {
    let pivot = col;
    for (let row = col + 1; row < size; row++) {
      if (Math.abs(a[row][col]) > Math.abs(a[pivot][col])) pivot = row;
    }
    if (Math.abs(a[pivot][col]) < 1e-300) {
      throw new Error("singular normal equations; not enough distinct x values");
    }
    [a[col], a[pivot]] = [a[pivot], a[col]];
    for (let row = col + 1; row < size; row++) {
      const factor = a[row][col] / a[col][col];
      for (let k = col; k <= size; k++) a[row][k] -= factor * a[col][k];
    }
  }
  const x = new Array(size).fill(0);
  for (let row = size - 1; row >= 0; row--) {
    let acc = a[row][size];
    for (let k = row + 1; k < size; k++) acc -= a[row][k] * x[k];
    x[row] = acc / a[row][row];
  }
  return x;
}

export function polyval(coefficients: number[], x: number): number {
  let y = 0;
  for (const c of coefficients) y = y * x + c;
  return y;
}

export function polyfit(xs: number[], ys: number[], degree: number): PolynomialFit {
  if (xs.length !== ys.length) throw new Error("xs and ys must have equal length");
  if (xs.length < degree + 1) throw new Error(`need at least ${degree + 1} points for degree ${degree}`);
  const m = degree + 1;
  const normal: number[][] = Array.from({ length: m }, () => new Array(m).fill(0));
  const rhs = new Array(m).fill(0);
  for (let i = 0; i < xs.length; i++) {
    // powers ordered highest degree first to match the coefficient layout
    const basis: number[] = [];
    for (let p = degree; p >= 0; p--) basis.push(Math.pow(xs[i], p));
    for (let r = 0; r < m; r++) {
      rhs[r] += basis[r] * ys[i];
      for (let c = 0; c < m; c++) normal[r][c] += basis[r] * basis[c];
    }
  }
  const coefficients = solve(normal, rhs);
  let rss = 0;
  let mean = 0;
  for (const y of ys) mean += y / ys.length;
  let ssTot = 0;
  for (let i = 0; i < xs.length; i++) {
    rss += (ys[i] - polyval(coefficients, xs[i])) ** 2;
    ssTot += (ys[i] - mean) ** 2;
  }
  const r2 = ssTot === 0 ? 1 : 1 - rss / ssTot;
  return { degree, coefficients, rss, r2 };
}

/** Largest relative coefficient disagreement between two fits. */
export function maxRelativeCoefficientGap(a: number[], b: number[]): number {
  if (a.length !== b.length) return Infinity;
  let worst = 0;
  for (let i = 0; i < a.length; i++) {
    const scale = Math.max(Math.abs(a[i]), Math.abs(b[i]));
    if (scale === 0) continue;
    worst = Math.max(worst, Math.abs(a[i] - b[i]) / scale);
  }
  return worst;
}
