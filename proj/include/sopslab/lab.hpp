#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sopslab/ddesolve.hpp"
#include "sopslab/limitcore.hpp"

namespace sopslab {

struct SyncSeries {
  std::vector<double> times;
  std::vector<double> g;
  double window = 0.0;
};

/// g(t) = sup |x_j(s) - x_k(s)| over pairs and s in [max(t - window, 0), t],
/// evaluated at grid nodes plus the window end points.
SyncSeries sync_measure(const Trajectory<double>& traj, double window,
                        const std::vector<double>& sample_times);

/// Least-squares slope of log g against t over samples with t in [t0, t1] and g > 0.
double log_slope(const SyncSeries& s, double t0, double t1);

/// Real root of nu*(r) = level on the branch right of r0 (upper = true) or left of it.
double nu_star_level_root(double level, bool upper, const LimitProfile& p);

struct FigureSpec {
  double alpha = 0.125;
  double a = 24.0;
  double b = 1.0;
  double beta = 0.0;         // <= 0 selects beta_Hopf + 0.01
  cplx target = 1.0;         // eigenvalue placed at z_1 of the 3-ring
  double perturbation = 1.0; // scales (0, 1, -1) / (10 sqrt 2)
  double horizon = 85.0;
  double h = 1e-3;
  double sample_dt = 0.1;
  double fit_t0 = 10.0;
  double fit_t1 = 80.0;
};

struct FigureResult {
  double beta = 0.0;
  double kappa1 = 0.0;
  double kappa2 = 0.0;
  cplx lambda;
  cplx nu;
  double slope = 0.0;
  SyncSeries sync;
  Eigen::MatrixXd samples;  // rows: sample times, columns: components
};

FigureResult figure_experiment(const FigureSpec& spec);

/// Columns t, x1..xn, g, log_g.
void write_figure_csv(const FigureResult& r, const std::string& path);

/// Columns t, x1..xn at the sample times.
void write_trajectory_csv(const Trajectory<double>& traj, const std::vector<double>& times,
                          const std::string& path);

void write_sync_csv(const SyncSeries& s, const std::string& path);

}  // namespace sopslab
