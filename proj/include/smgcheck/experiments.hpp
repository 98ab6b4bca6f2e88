#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "smgcheck/engine.hpp"
#include "smgcheck/trust.hpp"

namespace smgcheck {

/// Formula texts used by the experiments, with `got_k` as the target label.
inline constexpr const char* kUnpaidMaxFormula = "<<requester>> R{\"unpaid\"}max=? [ Fc \"got_k\" ]";
inline constexpr const char* kCostMinFormula = "<<requester>> R{\"cost\"}min=? [ Finf \"got_k\" ]";

/// Value of one reward structure cumulated to got_k once every player's
/// choice is fixed by the two strategies.
double evaluate_profile(const TrustGame& tg, const Strategy& a, const Strategy& b, const std::string& reward);

struct Fig1Point {
  double alpha;
  unsigned td;
};

struct Fig1Spec {
  TrustParams base;
  std::vector<Fig1Point> grid;
  unsigned k_min = 1;
  unsigned k_max = 13;
  /// k at which each configuration's requester strategy is kept.
  std::optional<unsigned> dump_k;
  unsigned jobs = 1;
};

struct Fig1Row {
  double alpha;
  unsigned td;
  unsigned k;
  double unpaid_max;
  double fraction;
};

struct StrategyDump {
  std::string name;
  TrustGame game;
  Strategy strategy;
};

struct Fig1Result {
  std::vector<Fig1Row> rows;  // sorted by (alpha, td, k)
  std::vector<StrategyDump> dumps;
};

Fig1Result run_fig1(const Fig1Spec& spec);
void write_fig1_csv(std::ostream& out, const std::vector<Fig1Row>& rows);

enum class Fig2Series { Automatic, StrategicOptimal, StrategicHeuristic };
std::string_view to_string(Fig2Series s);

struct Fig2Spec {
  TrustParams base;
  std::vector<Fig2Series> series{Fig2Series::Automatic, Fig2Series::StrategicOptimal,
                                 Fig2Series::StrategicHeuristic};
  unsigned k_min = 1;
  unsigned k_max = 13;
  unsigned jobs = 1;
};

struct Fig2Row {
  Fig2Series sharing;
  unsigned k;
  double min_cost;
  /// Expected number of paid services under the synthesized strategies.
  double paid_count;
};

std::vector<Fig2Row> run_fig2(const Fig2Spec& spec);
void write_fig2_csv(std::ostream& out, const std::vector<Fig2Row>& rows);

struct Fig3Spec {
  TrustParams base;
  std::vector<Pricing> pricings{Pricing::Original, Pricing::MaxDifference};
};

struct Fig3Row {
  Pricing pricing;
  unsigned provider;  // 1-based
  double received;
  double paid;
  double unpaid;
};

struct Fig3Result {
  std::vector<Fig3Row> rows;
  /// Min-cost value per pricing scheme, in the order of Fig3Spec::pricings.
  std::vector<double> min_cost;
};

Fig3Result run_fig3(const Fig3Spec& spec);
void write_fig3_csv(std::ostream& out, const std::vector<Fig3Row>& rows);

/// CSV `state,owner,description` for a trust game.
void write_trust_states_csv(std::ostream& out, const TrustGame& tg);

}  // namespace smgcheck
