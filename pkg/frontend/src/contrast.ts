/**
 * Theme palettes and WCAG-style contrast arithmetic. Trajectory colors
 * come from the scene document (hands blue, objects red in both
 * themes); the light background is chosen so both trajectory colors
 * keep a contrast ratio of at least 3:1 against it.
 */

import type { Vec3 } from "./scene";

export type Theme = "dark" | "light";

export interface ThemePalette {
  /** Scene clear color, 0..1 RGB. */
  background: Vec3;
  /** Ground grid lines. */
  grid: Vec3;
  /** CSS color for HUD text. */
  hudText: string;
  /** CSS background for HUD panels. */
  hudPanel: string;
}

export const THEMES: Record<Theme, ThemePalette> = {
  dark: {
    background: [0.055, 0.066, 0.086],
    grid: [0.22, 0.25, 0.3],
    hudText: "#e8eaf0",
    hudPanel: "rgba(16, 19, 26, 0.88)",
  },
  light: {
    background: [0.961, 0.961, 0.961],
    grid: [0.62, 0.64, 0.68],
    hudText: "#15181e",
    hudPanel: "rgba(247, 247, 247, 0.92)",
  },
};

/** sRGB channel (0..1) to linear light. */
export function srgbToLinear(c: number): number {
  return c <= 0.03928 ? c / 12.92 : Math.pow((c + 0.055) / 1.055, 2.4);
}

/** Relative luminance of an sRGB color (0..1 channels). */
export function relativeLuminance(rgb: Vec3): number {
  const [r, g, b] = rgb;
  return 0.2126 * srgbToLinear(r) + 0.7152 * srgbToLinear(g) + 0.0722 * srgbToLinear(b);
}

/** WCAG contrast ratio between two colors, in [1, 21]. */
export function contrastRatio(a: Vec3, b: Vec3): number {
  const la = relativeLuminance(a);
  const lb = relativeLuminance(b);
  const lighter = Math.max(la, lb);
  const darker = Math.min(la, lb);
  return (lighter + 0.05) / (darker + 0.05);
}
