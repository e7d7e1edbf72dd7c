#include <doctest.h>

#include <string>
#include <vector>

#include "asmeta/approach.hpp"
#include "asmeta/ensembles.hpp"
#include "asmeta/error.hpp"
#include "asmeta/meta_selection.hpp"
#include "asmeta/synthetic.hpp"

using namespace asmeta;
using K = ApproachSpec::Kind;

namespace {

TrainingData small_data() {
  SyntheticConfig c;
  c.n_instances = 40;
  c.n_algorithms = 3;
  c.n_features = 3;
  c.noise_sd = 0.3;
  c.seed = 2;
  const auto s = generate_synthetic(c);
  return make_training_data(s, s.all_instances());
}

Errc code_of(const std::string& text) {
  try {
    parse_approach(text);
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::IoError;
}

}  // namespace

TEST_SUITE("approach") {

TEST_CASE("base selectors with parameters") {
  const auto s = parse_approach("peralgo(trees=50, depth=4)");
  CHECK(s.kind == K::Base);
  CHECK(s.name == "peralgo");
  REQUIRE(s.params.size() == 2);
  CHECK(s.params[0] == std::pair<std::string, double>{"trees", 50});
  CHECK(s.params[1] == std::pair<std::string, double>{"depth", 4});
  CHECK(parse_approach("isac(k=3,sd=0.5)").params[1].second == 0.5);
  CHECK(parse_approach("sunny").params.empty());
  CHECK(parse_approach("sunny()").params.empty());
  CHECK(parse_approach("oracle").kind == K::Oracle);
  CHECK(is_base_selector(parse_approach("sbs")));
  CHECK_FALSE(is_base_selector(parse_approach("oracle")));
  CHECK(default_base_selectors() == std::vector<std::string>{"peralgo", "multiclass", "pairwise", "sunny", "isac"});
}

TEST_CASE("composite approaches") {
  const auto v = parse_approach("voting[borda]{peralgo,sunny(k=5),isac;search=exhaustive}");
  CHECK(v.kind == K::Voting);
  CHECK(v.aggregation == Aggregation::Borda);
  CHECK(v.search == CompositionSearch::Exhaustive);
  CHECK(v.members.size() == 3);
  CHECK(v.members[1].params[0].second == 5);

  const auto b = parse_approach("bagging[wmaj]{multiclass;k=7;seed=3}");
  CHECK(b.kind == K::Bagging);
  CHECK(b.aggregation == Aggregation::WeightedMajority);
  CHECK(b.k_members == 7);
  CHECK(b.seed == 3u);
  CHECK(parse_approach("bagging[maj]{sunny}").k_members == 10);

  const auto bo = parse_approach("boosting{pairwise;iters=5}");
  CHECK(bo.kind == K::Boosting);
  CHECK(bo.iterations == 5);
  CHECK(parse_approach("boosting{sunny}").iterations == 20);

  const auto st = parse_approach("stacking{meta=multiclass;bases=sunny,isac;fs=vt(0.2);split=disjoint(0.6)}");
  CHECK(st.kind == K::Stacking);
  CHECK(st.meta.size() == 1);
  CHECK(st.members.size() == 2);
  CHECK(st.variance_threshold == 0.2);
  CHECK(st.disjoint_ratio == 0.6);
  const auto st_defaults = parse_approach("stacking{meta=multiclass;bases=sunny;fs=vt;split=disjoint}");
  CHECK(st_defaults.variance_threshold == 0.16);
  CHECK(st_defaults.disjoint_ratio == 0.7);

  const auto a = parse_approach("ass{meta=sunny;bases=peralgo,voting[maj]{sunny,isac};inner=4}");
  CHECK(a.kind == K::Ass);
  CHECK(a.inner_folds == 4);
  CHECK(a.members[1].kind == K::Voting);
}

TEST_CASE("canonical text round-trips") {
  for (const std::string text :
       {"peralgo", "isac(k=3,sd=0.25)", "voting[mean]{peralgo,multiclass,pairwise,sunny,isac}",
        "voting[wmaj]{sunny,isac;search=exhaustive}", "bagging[borda]{sunny(k=4);k=3;seed=9}",
        "boosting{multiclass(trees=10);iters=4}", "stacking{meta=multiclass;bases=sunny,isac;fs=vt(0.1)}",
        "stacking{meta=peralgo;bases=voting[maj]{sunny,isac};split=disjoint(0.5)}",
        "ass{meta=multiclass;bases=peralgo,boosting{sunny};inner=5}", "oracle"}) {
    CAPTURE(text);
    const auto spec = parse_approach(text);
    const auto canon = to_string(spec);
    CHECK(parse_approach(canon) == spec);
    CHECK(to_string(parse_approach(canon)) == canon);
  }
  CHECK(to_string(parse_approach(" sunny ( k = 3 ) ")) == "sunny(k=3)");
  CHECK(to_string(parse_approach("multiclass(trees=20,depth=100)")) == "multiclass(trees=20,depth=100)");
  CHECK(to_string(parse_approach("isac(sd=0.1)")) == "isac(sd=0.1)");
}

TEST_CASE("syntax errors carry a position") {
  const std::vector<std::string> bad = {"",
                                        "forest",
                                        "sunny(k=)",
                                        "sunny(k=1.5)",
                                        "sunny(trees=3)",
                                        "voting[plurality]{sunny}",
                                        "voting[maj]{}",
                                        "voting[maj]{sunny",
                                        "bagging[maj]{sunny;iters=3}",
                                        "boosting{sunny;k=3}",
                                        "stacking{bases=sunny}",
                                        "stacking{meta=sunny}",
                                        "stacking{meta=sunny;bases=isac;fs=pca}",
                                        "ass{meta=sunny;bases=isac;split=shared}",
                                        "sunny extra"};
  for (const auto& text : bad) {
    CAPTURE(text);
    CHECK(code_of(text) == Errc::SpecSyntax);
    try {
      parse_approach(text);
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("position") != std::string::npos);
    }
  }
}

TEST_CASE("factories train the described selector") {
  const auto d = small_data();
  CHECK_THROWS_AS(make_factory(parse_approach("oracle")), Error);
  try {
    make_factory(parse_approach("oracle"));
  } catch (const Error& e) {
    CHECK(e.code() == Errc::InvalidConfig);
  }

  const auto v = make_factory(parse_approach("voting[maj]{sunny,isac,sbs}"))(d, 1);
  const auto* voting = dynamic_cast<const AggregatingEnsemble*>(v.get());
  REQUIRE(voting);
  CHECK(voting->kind() == EnsembleKind::Voting);
  CHECK(voting->num_members() == 3);

  const auto b = make_factory(parse_approach("bagging[mean]{sunny;k=4}"))(d, 1);
  CHECK(dynamic_cast<const AggregatingEnsemble&>(*b).num_members() == 4);

  const auto st = make_factory(parse_approach("stacking{meta=multiclass(trees=10);bases=sunny,isac}"))(d, 1);
  CHECK(dynamic_cast<const StackingEnsemble&>(*st).augment(d.features.row(0)).size() == 3 + 2 * 3);

  const auto a = make_factory(parse_approach("ass{meta=sunny;bases=sunny(k=2),sbs}"))(d, 1);
  CHECK(dynamic_cast<const SelectorSelector&>(*a).deployed().size() == 2);

  CHECK_FALSE(make_factory(parse_approach("sbs"))(d, 1)->needs_features());
  CHECK(make_factory(parse_approach("sunny"))(d, 1)->needs_features());
}

TEST_CASE("explicit seeds override the training seed") {
  const auto d = small_data();
  const auto f = make_factory(parse_approach("bagging[maj]{multiclass(trees=5);k=3;seed=42}"));
  const auto x = f(d, 1), y = f(d, 999);
  for (std::size_t r = 0; r < d.size(); ++r) CHECK(x->scores(d.features.row(r)) == y->scores(d.features.row(r)));
  const auto g = make_factory(parse_approach("bagging[maj]{multiclass(trees=5);k=3}"));
  bool differs = false;
  const auto p = g(d, 1), q = g(d, 999);
  for (std::size_t r = 0; r < d.size(); ++r) differs |= p->scores(d.features.row(r)) != q->scores(d.features.row(r));
  CHECK(differs);
}

}  // TEST_SUITE
