#pragma once

#include <memory>
#include <vector>

#include "lakes/core/evolve.hpp"
#include "lakes/dtc/coefficients.hpp"

namespace lakes::dtc {

struct FmOrder {
  double x_fm = 0.0;
  double z_fm = 0.0;
  bool x_flagged = false;  // closed-loop expectation below 1e-8
  bool z_flagged = false;
};

/// Ratio <open string> / sqrt|<closed loop>| along row 0: X on horizontal
/// links (e-anyon strings), Z on vertical links (m-anyon strings). The open
/// string covers `length` links (default Lx / 2), the loop the full row.
FmOrder fm_order_parameter(const DtcModel& model, const StateVector& psi, int length = 0);

struct DtcObservables {
  double overlap = 0.0;  // |<P_G psi0 | psi>|
  double overlap_per_site = 0.0;
  double gs_overlap = 0.0;  // with the ground state at K_end
  double gauss = 0.0;       // mean <G_v>
  double wilson = 0.0;      // mean <W_p>
  FmOrder fm;
};

/// Sweep K from k_start to k_end at fixed h_x, h_z.
class DtcContext {
 public:
  DtcContext(std::shared_ptr<const DtcModel> model, double h_x = 1.0, double h_z = 0.1, double k_start = 0.0,
             double k_end = 4.0);

  const DtcModel& model() const { return *model_; }
  double h_x() const { return h_x_; }
  double h_z() const { return h_z_; }
  double k_start() const { return k_start_; }
  double k_end() const { return k_end_; }
  DtcParams params(double K) const { return {K, h_x_, h_z_}; }
  const StateVector& initial_state() const { return psi0_; }
  const StateVector& target() const { return target_; }
  const StateVector& final_ground_state() const { return gs_end_; }
  double energy_scale() const;

 private:
  std::shared_ptr<const DtcModel> model_;
  double h_x_, h_z_, k_start_, k_end_;
  StateVector psi0_, target_, gs_end_;
};

std::shared_ptr<DtcContext> make_dtc_context(int lx = 2, int ly = 2, double h_x = 1.0, double h_z = 0.1,
                                             double k_start = 0.0, double k_end = 4.0);

DtcObservables observe(const DtcContext& ctx, const StateVector& psi);

/// order 0 = undriven, 1 = first order (h_z-dropped alpha), 2 = second-order
/// H_e ansatz with closed-form (alpha1, alpha2); Exact uses the full AGP of H(K).
enum class DtcDrive { None, FirstOrder, SecondOrder, Exact };

struct DtcRun {
  double total_time = 1.0;
  DtcDrive drive = DtcDrive::None;
  double lambda_f = 1.0;
  double dt = 0.0;
};

/// lambda_f from the integral ratio for the two approximate orders, 1 otherwise.
double default_lambda_f(DtcDrive drive);

/// Approximate AGP of the given order at K (h_z ignored), as a sparse matrix.
SparseMatrixXc approximate_agp(const DtcModel& model, DtcDrive drive, double K, double h_x);

struct DtcOutcome {
  StateVector final_state;
  DtcObservables obs;
};

/// Evolve the k_start ground state under H(K) + K' lambda_f A(K).
DtcOutcome dtc_cd_sweep(const DtcContext& ctx, const DtcRun& run);

/// U_c = e^{-ix H_e} e^{-iy A_1} e^{2ix H_e} e^{-iy A_1} e^{-ix H_e}, A_1 = sum starY, H_e at K.
void apply_dtc_cycle(const DtcModel& model, double K, double h_x, double x, double y, VectorXc& psi);

struct DtcPulseResult {
  std::vector<double> k_values;  // start of each cycle's slice
  std::vector<double> x_values;
  std::vector<DtcObservables> trajectory;  // index 0 = initial state
  std::vector<double> elapsed;             // h_x t after each cycle: sum of 4|x| + 2|y|
  StateVector final_state;
};

/// n_c cycles with x = sqrt(-2 alpha2 / alpha1) at each slice start and constant y.
DtcPulseResult dtc_pulse_sequence(const DtcContext& ctx, int n_c, double y);

struct YScan {
  std::vector<double> ys;
  std::vector<double> overlaps;  // final per-site overlap with P_G psi0
  double best_y = 0.0;
  double best_overlap = 0.0;
};

YScan dtc_y_scan(const DtcContext& ctx, int n_c, const std::vector<double>& ys, int threads = 1);

/// Optimum reported for a width-4 cylinder; centre of the default y scan.
inline constexpr double kReferencePulseY = -2.17e-2;

}  // namespace lakes::dtc
