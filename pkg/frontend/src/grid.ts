/**
 * Slider grid arithmetic, mirroring the service's validation exactly.
 *
 * The grid is every integer multiple of the step inside [-1, 1] with the
 * endpoints always present; a step of 1 yields the three soft-choice
 * positions. Keeping the client on this grid means the service never has
 * a reason to reject a submitted value.
 */

export function sliderGrid(epsilon: number): number[] {
  if (!(epsilon > 0 && epsilon <= 1)) {
    throw new Error(`epsilon must be in (0, 1], got ${epsilon}`);
  }
  const nMax = Math.floor(1 / epsilon + 1e-9);
  const points: number[] = [];
  for (let n = -nMax; n <= nMax; n++) {
    points.push(n * epsilon);
  }
  if (points[points.length - 1]! < 1 - 1e-12) {
    points.unshift(-1);
    points.push(1);
  }
  points[0] = -1;
  points[points.length - 1] = 1;
  return points;
}

/** Nearest grid index; exact midpoints resolve away from zero. */
export function snapIndex(value: number, grid: number[]): number {
  let best = 0;
  let bestDist = Infinity;
  for (let i = 0; i < grid.length; i++) {
    const dist = Math.abs(value - grid[i]!);
    if (
      dist < bestDist - 1e-15 ||
      (Math.abs(dist - bestDist) <= 1e-15 && Math.abs(grid[i]!) > Math.abs(grid[best]!))
  ) {
      best = i;
      bestDist = dist;
    }
  }
  return best;
}

export function snapToGrid(value: number, epsilon: number): number {
  const grid = sliderGrid(epsilon);
  return grid[snapIndex(value, grid)]!;
}

export function isOnGrid(value: number, epsilon: number): boolean {
  return Math.abs(snapToGrid(value, epsilon) - value) <= 1e-9;
}

/** Index of the neutral position (always present by construction). */
export function neutralIndex(grid: number[]): number {
  return snapIndex(0, grid);
}
