#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "asmeta/aggregation.hpp"
#include "asmeta/ensembles.hpp"
#include "asmeta/selectors.hpp"

namespace asmeta {

/// Parsed approach string.
///
///   base      := name [ '(' key '=' value { ',' key '=' value } ')' ]
///                name in peralgo | multiclass | pairwise | sunny | isac | sbs
///   oracle    := 'oracle'                                  (harness only)
///   voting    := 'voting[' agg ']{' spec { ',' spec } [ ';search=' all|exhaustive ] '}'
///   bagging   := 'bagging[' agg ']{' spec [ ';k=' int ] [ ';seed=' int ] '}'
///   boosting  := 'boosting{' spec [ ';iters=' int ] [ ';seed=' int ] '}'
///   stacking  := 'stacking{meta=' spec ';bases=' spec { ',' spec }
///                [ ';fs=' none|vt(x) ] [ ';split=' shared|disjoint(x) ] '}'
///   ass       := 'ass{meta=' spec ';bases=' spec { ',' spec } [ ';inner=' int ] '}'
///   agg       := maj | wmaj | mean | borda
///
/// Members of composite approaches may themselves be composite.
struct ApproachSpec {
  enum class Kind { Base, Oracle, Voting, Bagging, Boosting, Stacking, Ass };

  Kind kind = Kind::Base;
  /// Base selector name.
  std::string name;
  /// Base selector parameters in written order.
  std::vector<std::pair<std::string, double>> params;

  Aggregation aggregation = Aggregation::Majority;
  CompositionSearch search = CompositionSearch::AllMembers;
  /// voting members, bagging/boosting member (one), stacking/ass bases
  std::vector<ApproachSpec> members;
  /// stacking/ass meta-learner (exactly one when used)
  std::vector<ApproachSpec> meta;

  std::size_t k_members = 10;
  std::size_t iterations = 20;
  std::size_t inner_folds = 3;
  std::optional<std::uint64_t> seed;
  std::optional<double> variance_threshold;
  std::optional<double> disjoint_ratio;

  bool operator==(const ApproachSpec&) const = default;
};

/// Throws Error(SpecSyntax) with the offending position.
ApproachSpec parse_approach(std::string_view text);

/// Canonical text form; parse_approach(to_string(s)) == s.
std::string to_string(const ApproachSpec& spec);

/// Trainer for the approach. Explicit `seed=` values in the approach string override
/// the seed passed at training time. Throws Error(InvalidConfig) for
/// `oracle`, which is not a trainable selector.
SelectorFactory make_factory(const ApproachSpec& spec);

/// True for approaches that are one of the base selectors.
bool is_base_selector(const ApproachSpec& spec);

/// The five base selectors with default parameters.
std::vector<std::string> default_base_selectors();

}  // namespace asmeta
