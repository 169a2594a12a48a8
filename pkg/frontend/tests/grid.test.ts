import { describe, expect, it } from "vitest";

import { isOnGrid, neutralIndex, sliderGrid, snapIndex, snapToGrid } from "../src/grid.js";

describe("sliderGrid", () => {
  it("exposes exactly 21 positions at step 0.1", () => {
    expect(sliderGrid(0.1)).toHaveLength(21);
  });

  it("degenerates to the three soft-choice positions at step 1", () => {
    expect(sliderGrid(1)).toEqual([-1, 0, 1]);
  });

  it("always includes both endpoints and zero", () => {
    for (const eps of [0.1, 0.2, 0.25, 0.3, 0.5, 1]) {
      const grid = sliderGrid(eps);
      expect(grid[0]).toBe(-1);
      expect(grid[grid.length - 1]).toBe(1);
      expect(grid[neutralIndex(grid)]).toBeCloseTo(0, 12);
    }
  });

  it("is ascending", () => {
    for (const eps of [0.1, 0.3, 1]) {
      const grid = sliderGrid(eps);
      for (let i = 1; i < grid.length; i++) {
        expect(grid[i]!).toBeGreaterThan(grid[i - 1]!);
      }
    }
  });

  it("rejects bad steps", () => {
    expect(() => sliderGrid(0)).toThrow();
    expect(() => sliderGrid(1.5)).toThrow();
  });
});

describe("snapping", () => {
  it("snaps to the nearest position", () => {
    expect(snapToGrid(0.44, 0.1)).toBeCloseTo(0.4, 12);
    expect(snapToGrid(-0.08, 0.1)).toBeCloseTo(-0.1, 12);
  });

  it("clamps outside the bar", () => {
    expect(snapToGrid(1.7, 0.1)).toBe(1);
    expect(snapToGrid(-5, 1)).toBe(-1);
  });

  it("breaks midpoint ties away from zero", () => {
    expect(snapToGrid(0.45, 0.1)).toBeCloseTo(0.5, 12);
    expect(snapToGrid(-0.45, 0.1)).toBeCloseTo(-0.5, 12);
  });

  it("every snapped value passes the on-grid check", () => {
    for (const eps of [0.1, 0.3, 1]) {
      for (let i = 0; i < 500; i++) {
        const x = -1.5 + (3 * i) / 499;
        expect(isOnGrid(snapToGrid(x, eps), eps)).toBe(true);
      }
    }
  });

  it("snapIndex is a valid index", () => {
    const grid = sliderGrid(0.1);
    expect(snapIndex(-2, grid)).toBe(0);
    expect(snapIndex(2, grid)).toBe(grid.length - 1);
    expect(grid[snapIndex(0.31, grid)]).toBeCloseTo(0.3, 12);
  });
});
