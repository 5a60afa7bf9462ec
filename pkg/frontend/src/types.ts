export interface AssetInfo {
  id: number;
  label: string;
  technology: number;
  country: number;
  category: string;
  mean_roi_ratio: number;
}

export interface Universe {
  n: number;
  m: number;
  budget: number;
  beta: number;
  w_grid: number[];
  assets: AssetInfo[];
}

export interface SolvePoint {
  w: number;
  x: number[];
  shares: number[];
  budget: number;
  roi: number;
  risk: number;
  hhi: number;
  strategy: string;
  converged: boolean;
  alpha: number | null;
  feasible: boolean;
}

export interface BoundReport {
  value: number;
  bound: number;
  satisfied: boolean;
  active: boolean;
}

export interface ConstrainedPoint extends SolvePoint {
  dp: number;
  dr: number;
  source: string;
  constraints: { roi: BoundReport; risk: BoundReport };
  baseline: { roi: number; risk: number; hhi: number };
}

export interface PenaltyPoint extends SolvePoint {
  w_d: number;
  theta1: number;
}
