export {
  CURVE_COLUMNS,
  SLICE_COLUMNS,
  STATS_COLUMNS,
  SWEEP_COLUMNS,
  SYSTEM_COLUMNS,
  USER_COLUMNS,
  SchemaError,
  num,
  parseCsv,
  type Row,
} from "./schema.js";
export {
  closeEnough,
  distributionStats,
  kahanSum,
  mean,
  percentile,
  type DistributionStats,
} from "./stats.js";
export { verifyStats, type StatCheck } from "./verify.js";
export { buildFigure, type BuiltFigure, type FigureKind, type FigureSpec } from "./figures.js";
export { renderSvg, writeFigure } from "./render.js";
export { main } from "./cli.js";
