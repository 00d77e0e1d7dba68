import type { EChartsOption, SeriesOption } from "echarts/types/dist/echarts";
import { NumericTable, SchemaError, requireColumns } from "./csv.js";

export const FIGURE_KINDS = ["collapse", "spin", "decay", "arclength"] as const;
export type FigureKind = (typeof FIGURE_KINDS)[number];

export interface FigureSpec {
  kind: FigureKind;
  input: string;
  output: string;
  width?: number;
  height?: number;
  title?: string;
}

export interface Figure {
  option: EChartsOption;
  /** Max |theta - theta_closed_form| when the spin overlay is present. */
  spinGap?: number;
}

function line(name: string, x: Float64Array, y: Float64Array, dashed = false): SeriesOption {
  const points: [number, number][] = [];
  for (let i = 0; i < x.length; i++) {
    points.push([x[i], y[i]]);
  }
  return {
    name,
    type: "line",
    showSymbol: false,
    lineStyle: dashed ? { type: "dashed", width: 2 } : { width: 2 },
    data: points,
  };
}

function axes(xName: string, yName: string, logY = false): Partial<EChartsOption> {
  return {
    xAxis: { type: "value", name: xName, nameLocation: "middle", nameGap: 28 },
    yAxis: logY
      ? { type: "log", name: yName }
      : { type: "value", name: yName, scale: true },
  };
}

function frame(title: string, seriesNames: string[]): Partial<EChartsOption> {
  return {
    animation: false,
    backgroundColor: "#ffffff",
    title: { text: title, left: "center" },
    legend: seriesNames.length > 1 ? { data: seriesNames, bottom: 0 } : undefined,
    grid: { left: 70, right: 30, top: 50, bottom: 60 },
  };
}

/** The time column differs between orbit CSVs (tau) and lift CSVs (t). */
function timeColumn(table: NumericTable, context: string): string {
  if ("tau" in table.data) return "tau";
  if ("t" in table.data) return "t";
  throw new SchemaError(`${context}: missing column "tau" or "t" (have: ${table.columns.join(", ")})`);
}

function collapseFigure(table: NumericTable, title: string): Figure {
  requireColumns(table, ["tau", "r"], "collapse figure");
  const tau = table.data.tau;
  const r = table.data.r;
  const xs: number[] = [];
  const ys: number[] = [];
  for (let i = 0; i < table.length; i++) {
    if (r[i] > 0) {
      xs.push(tau[i]);
      ys.push(Math.log(r[i]));
    }
  }
  if (xs.length === 0) {
    throw new SchemaError("collapse figure: r is never positive, nothing to plot");
  }
  return {
    option: {
      ...frame(title || "size collapse", ["ln r"]),
      ...axes("tau", "ln r"),
      series: [line("ln r", Float64Array.from(xs), Float64Array.from(ys))],
    },
  };
}

function spinFigure(table: NumericTable, title: string): Figure {
  const xcol = timeColumn(table, "spin figure");
  requireColumns(table, ["theta"], "spin figure");
  const x = table.data[xcol];
  const theta = table.data.theta;
  const series = [line("theta", x, theta)];
  const names = ["theta"];
  let spinGap: number | undefined;
  if ("theta_closed_form" in table.data) {
    const closed = table.data.theta_closed_form;
    series.push(line("theta_closed_form", x, closed, true));
    names.push("theta_closed_form");
    spinGap = 0;
    for (let i = 0; i < table.length; i++) {
      spinGap = Math.max(spinGap, Math.abs(theta[i] - closed[i]));
    }
  }
  return {
    option: {
      ...frame(title || "lifted spin angle", names),
      ...axes(xcol, "theta"),
      series,
    },
    spinGap,
  };
}

function decayFigure(table: NumericTable, title: string): Figure {
  requireColumns(table, ["tau", "W", "bound_curve"], "decay figure");
  return {
    option: {
      ...frame(title || "potential decay vs certified bound", ["W", "bound_curve"]),
      ...axes("tau", "W", true),
      series: [
        line("W", table.data.tau, table.data.W),
        line("bound_curve", table.data.tau, table.data.bound_curve, true),
      ],
    },
  };
}

function arclengthFigure(table: NumericTable, title: string): Figure {
  const xcol = timeColumn(table, "arclength figure");
  requireColumns(table, ["arclength"], "arclength figure");
  return {
    option: {
      ...frame(title || "shape arclength partial sums", ["arclength"]),
      ...axes(xcol, "arclength"),
      series: [line("arclength", table.data[xcol], table.data.arclength)],
    },
  };
}

export function buildFigure(table: NumericTable, kind: FigureKind, title = ""): Figure {
  switch (kind) {
    case "collapse":
      return collapseFigure(table, title);
    case "spin":
      return spinFigure(table, title);
    case "decay":
      return decayFigure(table, title);
    case "arclength":
      return arclengthFigure(table, title);
    default: {
      const names = FIGURE_KINDS.join(", ");
      throw new SchemaError(`unknown figure kind "${kind as string}" (expected one of: ${names})`);
    }
  }
}
