#include "asmeta/approach.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <set>

#include "asmeta/error.hpp"
#include "asmeta/meta_selection.hpp"

namespace asmeta {
namespace {

const std::set<std::string> kBaseNames = {"peralgo", "multiclass", "pairwise", "sunny", "isac", "sbs"};

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  ApproachSpec parse_all() {
    auto spec = parse_spec();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing text");
    return spec;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw Error(Errc::SpecSyntax, why + " at position " + std::to_string(pos_) + " in '" + std::string(s_) + "'");
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < s_.size() && s_[pos_] == c;
  }

  void expect(char c) {
    if (!peek(c)) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  bool accept(char c) {
    if (!peek(c)) return false;
    ++pos_;
    return true;
  }

  std::string ident() {
    skip_ws();
    const auto start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    if (start == pos_) fail("expected a name");
    return std::string(s_.substr(start, pos_ - start));
  }

  double number() {
    skip_ws();
    const auto start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.' ||
                                s_[pos_] == '-' || s_[pos_] == '+' || s_[pos_] == 'e' || s_[pos_] == 'E'))
      ++pos_;
    const std::string text(s_.substr(start, pos_ - start));
    try {
      std::size_t used = 0;
      const double v = std::stod(text, &used);
      if (used != text.size()) fail("malformed number");
      return v;
    } catch (const std::logic_error&) {
      fail("expected a number");
    }
  }

  std::size_t count() {
    const double v = number();
    if (v < 0 || v != std::floor(v)) fail("expected a non-negative integer");
    return static_cast<std::size_t>(v);
  }

  void key(const char* expected) {
    const auto k = ident();
    if (k != expected) fail(std::string("expected '") + expected + "'");
    expect('=');
  }

  Aggregation aggregation() {
    expect('[');
    const auto name = ident();
    expect(']');
    try {
      return parse_aggregation(name);
    } catch (const Error&) {
      fail("unknown aggregation '" + name + "'");
    }
  }

  std::vector<ApproachSpec> spec_list() {
    std::vector<ApproachSpec> out{parse_spec()};
    while (accept(',')) out.push_back(parse_spec());
    return out;
  }

  ApproachSpec parse_spec() {
    ApproachSpec spec;
    const auto name = ident();
    if (name == "oracle") {
      spec.kind = ApproachSpec::Kind::Oracle;
      return spec;
    }
    if (name == "voting") {
      spec.kind = ApproachSpec::Kind::Voting;
      spec.aggregation = aggregation();
      expect('{');
      spec.members = spec_list();
      while (accept(';')) {
        key("search");
        const auto mode = ident();
        if (mode == "all") spec.search = CompositionSearch::AllMembers;
        else if (mode == "exhaustive") spec.search = CompositionSearch::Exhaustive;
        else fail("search must be 'all' or 'exhaustive'");
      }
      expect('}');
      return spec;
    }
    if (name == "bagging" || name == "boosting") {
      const bool bagging = name == "bagging";
      spec.kind = bagging ? ApproachSpec::Kind::Bagging : ApproachSpec::Kind::Boosting;
      if (bagging) spec.aggregation = aggregation();
      else spec.aggregation = Aggregation::WeightedMajority;
      expect('{');
      spec.members.push_back(parse_spec());
      while (accept(';')) {
        const auto k = ident();
        expect('=');
        if (k == "seed") spec.seed = count();
        else if (bagging && k == "k") spec.k_members = count();
        else if (!bagging && k == "iters") spec.iterations = count();
        else fail("unknown option '" + k + "'");
      }
      expect('}');
      return spec;
    }
    if (name == "stacking" || name == "ass") {
      const bool stacking = name == "stacking";
      spec.kind = stacking ? ApproachSpec::Kind::Stacking : ApproachSpec::Kind::Ass;
      expect('{');
      do {
        const auto k = ident();
        expect('=');
        if (k == "meta") {
          spec.meta = {parse_spec()};
        } else if (k == "bases") {
          spec.members = spec_list();
        } else if (!stacking && k == "inner") {
          spec.inner_folds = count();
        } else if (stacking && k == "fs") {
          const auto mode = ident();
          if (mode == "none") {
            spec.variance_threshold.reset();
          } else if (mode == "vt") {
            spec.variance_threshold = 0.16;
            if (accept('(')) {
              spec.variance_threshold = number();
              expect(')');
            }
          } else {
            fail("fs must be 'none' or 'vt(x)'");
          }
        } else if (stacking && k == "split") {
          const auto mode = ident();
          if (mode == "shared") {
            spec.disjoint_ratio.reset();
          } else if (mode == "disjoint") {
            spec.disjoint_ratio = 0.7;
            if (accept('(')) {
              spec.disjoint_ratio = number();
              expect(')');
            }
          } else {
            fail("split must be 'shared' or 'disjoint(x)'");
          }
        } else {
          fail("unknown option '" + k + "'");
        }
      } while (accept(';'));
      expect('}');
      if (spec.meta.empty()) fail("missing meta=");
      if (spec.members.empty()) fail("missing bases=");
      return spec;
    }
    if (!kBaseNames.count(name)) fail("unknown selector '" + name + "'");
    spec.kind = ApproachSpec::Kind::Base;
    spec.name = name;
    if (accept('(')) {
      if (!peek(')')) {
        do {
          const auto k = ident();
          expect('=');
          spec.params.emplace_back(k, number());
        } while (accept(','));
      }
      expect(')');
    }
    validate_base(spec);
    return spec;
  }

  void validate_base(const ApproachSpec& spec) {
    std::set<std::string> allowed;
    if (spec.name == "peralgo" || spec.name == "multiclass" || spec.name == "pairwise") allowed = {"trees", "depth"};
    else if (spec.name == "sunny") allowed = {"k"};
    else if (spec.name == "isac") allowed = {"k", "sd"};
    for (const auto& [k, v] : spec.params) {
      if (!allowed.count(k)) fail("selector '" + spec.name + "' has no parameter '" + k + "'");
      if (k != "sd" && (v < 0 || v != std::floor(v))) fail("parameter '" + k + "' must be a non-negative integer");
    }
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

std::string fmt_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string join(const std::vector<ApproachSpec>& specs) {
  std::string out;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (i) out += ',';
    out += to_string(specs[i]);
  }
  return out;
}

double param(const ApproachSpec& spec, const std::string& key, double fallback) {
  for (const auto& [k, v] : spec.params)
    if (k == key) return v;
  return fallback;
}

std::vector<SelectorFactory> factories(const std::vector<ApproachSpec>& specs) {
  std::vector<SelectorFactory> out;
  for (const auto& s : specs) out.push_back(make_factory(s));
  return out;
}

}  // namespace

ApproachSpec parse_approach(std::string_view text) { return Parser(text).parse_all(); }

std::string to_string(const ApproachSpec& spec) {
  using K = ApproachSpec::Kind;
  switch (spec.kind) {
    case K::Oracle: return "oracle";
    case K::Base: {
      std::string out = spec.name;
      if (!spec.params.empty()) {
        out += '(';
        for (std::size_t i = 0; i < spec.params.size(); ++i) {
          if (i) out += ',';
          out += spec.params[i].first + "=" + fmt_number(spec.params[i].second);
        }
        out += ')';
      }
      return out;
    }
    case K::Voting:
      return "voting[" + std::string(to_string(spec.aggregation)) + "]{" + join(spec.members) +
             ";search=" + (spec.search == CompositionSearch::Exhaustive ? "exhaustive" : "all") + "}";
    case K::Bagging: {
      std::string out = "bagging[" + std::string(to_string(spec.aggregation)) + "]{" + join(spec.members) +
                        ";k=" + std::to_string(spec.k_members);
      if (spec.seed) out += ";seed=" + std::to_string(*spec.seed);
      return out + "}";
    }
    case K::Boosting: {
      std::string out = "boosting{" + join(spec.members) + ";iters=" + std::to_string(spec.iterations);
      if (spec.seed) out += ";seed=" + std::to_string(*spec.seed);
      return out + "}";
    }
    case K::Stacking:
      return "stacking{meta=" + join(spec.meta) + ";bases=" + join(spec.members) + ";fs=" +
             (spec.variance_threshold ? "vt(" + fmt_number(*spec.variance_threshold) + ")" : std::string("none")) +
             ";split=" +
             (spec.disjoint_ratio ? "disjoint(" + fmt_number(*spec.disjoint_ratio) + ")" : std::string("shared")) +
             "}";
    case K::Ass:
      return "ass{meta=" + join(spec.meta) + ";bases=" + join(spec.members) +
             ";inner=" + std::to_string(spec.inner_folds) + "}";
  }
  return {};
}

bool is_base_selector(const ApproachSpec& spec) { return spec.kind == ApproachSpec::Kind::Base; }

std::vector<std::string> default_base_selectors() { return {"peralgo", "multiclass", "pairwise", "sunny", "isac"}; }

SelectorFactory make_factory(const ApproachSpec& spec) {
  using K = ApproachSpec::Kind;
  switch (spec.kind) {
    case K::Oracle:
      throw Error(Errc::InvalidConfig, "'oracle' needs the true performance data and cannot be trained");
    case K::Base: {
      ForestSelectorParams fp;
      fp.n_trees = static_cast<std::size_t>(param(spec, "trees", 100));
      fp.max_depth = static_cast<std::size_t>(param(spec, "depth", 0));
      if (spec.name == "peralgo")
        return [fp](const TrainingData& d, std::uint64_t seed) { return fit_peralgo(d, seed, fp); };
      if (spec.name == "multiclass")
        return [fp](const TrainingData& d, std::uint64_t seed) { return fit_multiclass(d, seed, fp); };
      if (spec.name == "pairwise")
        return [fp](const TrainingData& d, std::uint64_t seed) { return fit_pairwise(d, seed, fp); };
      if (spec.name == "sunny") {
        const auto k = static_cast<std::size_t>(param(spec, "k", 16));
        return [k](const TrainingData& d, std::uint64_t) { return fit_sunny(d, k); };
      }
      if (spec.name == "isac") {
        IsacParams ip;
        ip.k_clusters = static_cast<std::size_t>(param(spec, "k", 0));
        ip.sd_multiplier = param(spec, "sd", 1.0);
        return [ip](const TrainingData& d, std::uint64_t seed) { return fit_isac(d, seed, ip); };
      }
      if (spec.name == "sbs") return [](const TrainingData& d, std::uint64_t) { return fit_sbs(d); };
      throw Error(Errc::SpecSyntax, "unknown selector '" + spec.name + "'");
    }
    case K::Voting: {
      auto members = factories(spec.members);
      const auto agg = spec.aggregation;
      const auto search = spec.search;
      return [members, agg, search](const TrainingData& d, std::uint64_t seed) -> SelectorPtr {
        return fit_voting(d, members, agg, search, seed).ensemble;
      };
    }
    case K::Bagging: {
      auto member = make_factory(spec.members.front());
      const auto agg = spec.aggregation;
      const auto k = spec.k_members;
      const auto fixed = spec.seed;
      return [member, agg, k, fixed](const TrainingData& d, std::uint64_t seed) -> SelectorPtr {
        return fit_bagging(d, member, k, agg, fixed.value_or(seed));
      };
    }
    case K::Boosting: {
      auto member = make_factory(spec.members.front());
      const auto iters = spec.iterations;
      const auto fixed = spec.seed;
      return [member, iters, fixed](const TrainingData& d, std::uint64_t seed) -> SelectorPtr {
        return fit_boosting(d, member, iters, fixed.value_or(seed)).ensemble;
      };
    }
    case K::Stacking: {
      auto bases = factories(spec.members);
      auto meta = make_factory(spec.meta.front());
      StackingOptions opts;
      opts.variance_threshold = spec.variance_threshold;
      opts.disjoint_ratio = spec.disjoint_ratio;
      return [bases, meta, opts](const TrainingData& d, std::uint64_t seed) -> SelectorPtr {
        return fit_stacking(d, bases, meta, opts, seed);
      };
    }
    case K::Ass: {
      auto bases = factories(spec.members);
      auto meta = make_factory(spec.meta.front());
      const auto inner = spec.inner_folds;
      return [bases, meta, inner](const TrainingData& d, std::uint64_t seed) -> SelectorPtr {
        return fit_ass(d, bases, meta, inner, seed);
      };
    }
  }
  throw Error(Errc::SpecSyntax, "unhandled approach kind");
}

}  // namespace asmeta
