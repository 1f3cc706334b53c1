#pragma once

#include <vector>

#include <Eigen/Core>

#include "logicut/lp.hpp"
#include "logicut/oracle.hpp"

namespace logicut {

// Multicommodity network design: build a subset of undirected edges (z) and
// route each commodity's balanced supply/demand over them, either direction,
// minimizing
//
//   (1/2) x^T Q x + d^T x + penalty * sum_e max(0, x_e - u_e),
//
// where x_e is the total flow carried by edge e (all commodities, both
// directions) and the capacity u_e is soft. Big-M couples through the cap
// x_e <= M z_e with M the total positive supply; ridge adds the perspective
// shipment penalty.
struct NetdesignInstance {
  struct Edge {
    int tail = 0;
    int head = 0;
  };
  int num_nodes = 0;
  std::vector<Edge> edges;
  Eigen::MatrixXd Q;   // edges x edges, PSD
  Eigen::VectorXd d;   // linear flow cost per edge
  Eigen::VectorXd u;   // soft capacity per edge
  double penalty = 0.0;
  Eigen::MatrixXd b;   // nodes x commodities, each column sums to zero
};

class NetdesignOracle final : public Oracle {
 public:
  NetdesignOracle(NetdesignInstance instance, Regularizer reg);

  int num_binaries() const override { return static_cast<int>(instance_.edges.size()); }
  std::string family() const override { return "netdesign"; }
  const Regularizer& regularizer() const override { return reg_; }
  Regularizer natural_regularizer() const override { return Regularizer::big_m(big_m()); }

  SubproblemResult evaluate(const std::vector<int>& z) const override;
  SubproblemResult evaluate_fractional(const Eigen::VectorXd& z) const override;

  // h over the per-edge dual: the same flow problem with edge rebate alpha_e
  // and no coupling. Needs strictly convex flow costs (Q positive definite).
  bool has_h_oracle() const override { return h_supported_; }
  HEval h_eval(const Eigen::VectorXd& alpha) const override;
  double step_scale() const override { return big_m(); }

  // Total positive supply over all commodities; no routing can load an edge
  // beyond it, which is what makes the cap x_e <= M z_e non-restrictive at
  // binary z.
  double big_m() const { return total_supply_; }

  const NetdesignInstance& instance() const { return instance_; }

 private:
  // Variable layout of a flow program over a chosen edge subset: commodity
  // arc flows first, then aggregate x per edge, then overshoot slacks t when
  // the penalty is active.
  struct FlowLayout {
    std::vector<int> open;
    int num_commodities = 0;
    int x0 = 0;
    int t0 = 0;
    int cols = 0;
    bool has_t = false;
    int flow_col(int j, int a, int dir) const {
      return j * 2 * static_cast<int>(open.size()) + 2 * a + dir;
    }
  };

  SubproblemResult eval(const Eigen::VectorXd& z, bool binary) const;
  bool commodities_routable(const Eigen::VectorXd& z, bool scaled_caps,
                            Cut* cut_if_not) const;
  SubproblemResult joint_capacity_cut(const Eigen::VectorXd& z) const;
  KernelSolution solve_flow(const std::vector<int>& open, const Eigen::VectorXd& x_hi,
                            const Eigen::VectorXd& x_quad_extra,
                            const Eigen::VectorXd& x_lin, FlowLayout* layout) const;

  NetdesignInstance instance_;
  Regularizer reg_;
  double total_supply_ = 0.0;
  bool h_supported_ = false;
};

}  // namespace logicut
