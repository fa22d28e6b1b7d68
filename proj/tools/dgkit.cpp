// dgkit command line. Exit codes: 0 all checks pass, 1 verification failure,
// 2 input or format error, 3 hypothesis failure.

#include <cstdlib>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "dgkit/suites.hpp"

using namespace dgkit;

namespace {

enum Exit { ok = 0, verification = 1, input = 2, hypothesis = 3 };

struct Config {
  std::string command;
  std::string field;
  std::string file, file2;
  std::string out, alpha_out, trace;
  std::string range = "-3..3";
  int at = 0;
  int window = 4;
  std::string suite;
  std::size_t samples = 10;
  std::uint64_t seed = 1;
  std::vector<std::string> categories;
  std::vector<std::string> inputs;
};

std::optional<FieldSpec> env_field() {
  if (const char* e = std::getenv("DGKIT_FIELD"); e && *e) return FieldSpec::parse(e);
  return std::nullopt;
}

FieldSpec declared_or_default(const Json& dgc) {
  if (dgc.contains("field")) return dgc_field(dgc);
  return env_field().value_or(FieldSpec::rational());
}

std::string extension(const std::string& path) { return std::filesystem::path(path).extension().string(); }

std::string category_ref(const Json& j, const std::string& ctx) {
  io::require(j.contains("category") && j["category"].is_string(), ctx + ": missing \"category\"");
  return j["category"].template get<std::string>();
}

// Field for the command, before any typed parsing happens.
FieldSpec choose_field(const Config& c) {
  if (!c.field.empty()) return FieldSpec::parse(c.field);
  const std::string& cmd = c.command;
  if (cmd == "verify") {
    if (!c.categories.empty()) return declared_or_default(io::read_json_file(c.categories[0]));
    return env_field().value_or(FieldSpec::prime(101));
  }
  if (!c.categories.empty()) return declared_or_default(io::read_json_file(c.categories[0]));
  if (extension(c.file) == ".dgc") return declared_or_default(io::read_json_file(c.file));
  auto j = io::read_json_file(c.file);
  auto ref = category_ref(j, c.file);
  if (is_builtin_fixture(ref)) return env_field().value_or(FieldSpec::rational());
  return declared_or_default(io::read_json_file(resolve_path(ref, c.file)));
}

std::pair<int, int> parse_range(const std::string& s) {
  auto pos = s.find("..");
  if (pos == std::string::npos) throw FormatError("range must be a..b, got '" + s + "'");
  auto lo = io::parse_int(s.substr(0, pos), "range"), hi = io::parse_int(s.substr(pos + 2), "range");
  if (lo > hi) throw FormatError("empty range '" + s + "'");
  return {lo, hi};
}

void emit(const Config& c, const Json& j) {
  if (c.out.empty())
    std::cout << io::dump(j);
  else
    io::write_text_file(c.out, io::dump(j));
}

template <class F>
class Runner {
 public:
  Runner(F k, const Config& c) : k_(std::move(k)), c_(c) {}

  int run() {
    const auto& cmd = c_.command;
    if (cmd == "validate") return validate();
    if (cmd == "h0") return h0();
    if (cmd == "hlc") return hlc();
    if (cmd == "cohomology") return cohomology();
    if (cmd == "tot") return tot();
    if (cmd == "cone") return cone();
    if (cmd == "truncate") return truncate();
    if (cmd == "reduce-onesided") return reduce();
    if (cmd == "resolve") return resolve_cmd(false);
    if (cmd == "reconstruct") return resolve_cmd(true);
    if (cmd == "verify") return verify();
    throw FormatError("unknown command '" + cmd + "'");
  }

 private:
  F k_;
  const Config& c_;

  CategoryPtr<F> category_file(const std::string& path) { return share(dgc_from_json(io::read_json_file(path), k_)); }

  // Category of a .dgm/.twc file, unless --category overrides it.
  CategoryPtr<F> category_of(const Json& j, const std::string& path) {
    if (!c_.categories.empty()) return category_file(c_.categories[0]);
    return load_category(category_ref(j, path), path, k_);
  }
  // Category reference for a written file: builtin names stay, paths are
  // re-expressed relative to wherever the output goes.
  std::string ref_for_output(const std::string& ref, const std::string& referrer) {
    if (is_builtin_fixture(ref)) return ref;
    auto abs = std::filesystem::absolute(resolve_path(ref, referrer));
    auto dir = c_.out.empty() ? std::filesystem::current_path() : std::filesystem::absolute(c_.out).parent_path();
    return std::filesystem::proximate(abs, dir).string();
  }
  std::string ref_for_output(const Json& j) {
    if (!c_.categories.empty()) return ref_for_output(c_.categories[0], "");
    return ref_for_output(category_ref(j, c_.file), c_.file);
  }

  void require_valid(const CategoryPtr<F>& q) {
    if (auto a = validate_dg_category(*q); !a) throw FormatError("category violates " + a.axiom + ": " + a.witness);
  }

  DgModule<F> module_file(const std::string& path, CategoryPtr<F> q = nullptr) {
    auto j = io::read_json_file(path);
    if (!q) q = category_of(j, path);
    require_valid(q);
    auto m = dgm_from_json(j, q);
    if (auto r = validate_module(m); !r) throw FormatError(path + ": invalid module: " + r.message);
    return m;
  }

  TwistedComplex<F> twisted_file(const std::string& path) {
    auto j = io::read_json_file(path);
    auto q = category_of(j, path);
    require_valid(q);
    auto x = twc_from_json(j, q);
    if (auto r = validate_twisted(x); !r.ok) throw FormatError(path + ": invalid twisted complex: " + r.message);
    return x;
  }

  // Target of a morphism file: its "target" reference, or the source itself.
  std::pair<TwMorphism<F>, TwistedComplex<F>> morphism_file(const std::string& path, const TwistedComplex<F>& x) {
    auto j = io::read_json_file(path);
    auto y = x;
    if (j.contains("target")) y = twisted_file(resolve_path(j["target"].template get<std::string>(), path));
    return {twm_from_json(j, x, y), y};
  }

  int validate() {
    auto ext = extension(c_.file);
    if (ext == ".dgm") {
      module_file(c_.file);
      std::cout << "valid module\n";
      return ok;
    }
    if (ext == ".twc") {
      twisted_file(c_.file);
      std::cout << "valid twisted complex\n";
      return ok;
    }
    auto q = category_file(c_.file);
    auto a = validate_dg_category(*q);
    if (!a) {
      std::cout << "violation " << a.axiom << ": " << a.witness << "\n";
      return verification;
    }
    std::cout << "valid: " << q->N() << " objects, field " << q->field.spec().name() << "\n";
    return ok;
  }

  int h0() {
    auto q = category_file(c_.file);
    require_valid(q);
    auto h = h0_category(*q);
    for (std::size_t a = 0; a < q->N(); ++a)
      for (std::size_t b = 0; b < q->N(); ++b) {
        std::cout << "H0(" << q->objects[a] << "," << q->objects[b] << ") dim " << h.dim(a, b);
        for (auto& r : h.hom(a, b).reps) std::cout << " [" << elem_string(*q, a, b, q->from_degree(a, b, 0, r)) << "]";
        std::cout << "\n";
      }
    if (auto r = validate_h0(h); !r) {
      std::cout << "H0 invalid: " << r.message << "\n";
      return verification;
    }
    return ok;
  }

  int hlc() {
    auto q = category_file(c_.file);
    require_valid(q);
    auto h = check_hlc(q);
    if (!h.ok()) {
      std::cout << "not hlc: " << h.witness << "\n";
      if (!h.nonpositive || !h.hfp_representables) std::cout << "witness degree " << h.witness_degree << "\n";
      return hypothesis;
    }
    std::cout << "hlc: nonpositive cohomology, coherent H0, hfp representables\n";
    return ok;
  }

  int cohomology() {
    auto [lo, hi] = parse_range(c_.range);
    auto m = extension(c_.file) == ".twc" ? totalize(twisted_file(c_.file)) : module_file(c_.file);
    const auto& q = *m.base;
    for (int i = lo; i <= hi; ++i) {
      auto dims = module_cohomology_dims(m, i);
      for (std::size_t a = 0; a < q.N(); ++a) std::cout << "H^" << i << " " << q.objects[a] << " " << dims[a] << "\n";
    }
    return ok;
  }

  int tot() {
    auto j = io::read_json_file(c_.file);
    auto x = twisted_file(c_.file);
    emit(c_, dgm_to_json(totalize(x), ref_for_output(j)));
    return ok;
  }

  int cone() {
    auto j = io::read_json_file(c_.file);
    auto x = twisted_file(c_.file);
    auto [f, y] = morphism_file(c_.file2, x);
    if (f.degree != 0 || !tw_differential(f, x, y).is_zero() || !is_one_sided(f)) throw HypothesisFailure("cone needs a closed one-sided morphism of degree 0");
    emit(c_, twc_to_json(tw_cone(f, x, y).cone, ref_for_output(j)));
    return ok;
  }

  int truncate() {
    auto j = io::read_json_file(c_.file);
    auto x = twisted_file(c_.file);
    emit(c_, twc_to_json(sigma_geq(x, c_.at), ref_for_output(j)));
    return ok;
  }

  int reduce() {
    auto x = twisted_file(c_.file);
    auto [f, y] = morphism_file(c_.file2, x);
    if (!tw_differential(f, x, y).is_zero()) throw HypothesisFailure("morphism is not closed");
    OneSidedResult<F> r;
    try {
      r = make_one_sided(f, x, y);
    } catch (const NotReducible& e) {
      std::cout << "not reducible: " << e.what() << "\nwitness degree " << e.degree << "\n";
      return hypothesis;
    }
    auto msg = check_one_sided(f, x, y);
    std::cout << "input one-sided: " << (is_one_sided(f) ? "yes" : "no") << "\n";
    std::cout << "reduced components: " << r.g.comp.size() << ", homotopy components: " << r.alpha.comp.size() << "\n";
    std::cout << "checks: " << (msg.empty() ? "g one-sided, f - d(alpha) = g, Tot(alpha) homotopy" : msg) << "\n";
    if (!c_.out.empty()) io::write_text_file(c_.out, io::dump(twm_to_json(r.g, x, y)));
    if (!c_.alpha_out.empty()) io::write_text_file(c_.alpha_out, io::dump(twm_to_json(r.alpha, x, y)));
    return msg.empty() ? ok : verification;
  }

  int resolve_cmd(bool reconstruct_only) {
    auto q = category_file(c_.file);
    require_valid(q);
    auto m = module_file(c_.file2, q);
    if (reconstruct_only) {
      auto r = reconstruct(m, c_.window);
      int lo = r.trace.lo() + 2, hi = m.hi() + 1;
      auto tot = totalize(r.x);
      std::cout << "entries " << r.x.entries.size() << ", window " << r.trace.lo() << ".." << r.trace.top << "\n";
      for (int i = lo; i <= hi; ++i) {
        auto a = module_cohomology_dims(m, i), b = module_cohomology_dims(tot, i);
        for (std::size_t o = 0; o < q->N(); ++o) std::cout << "H^" << i << " " << q->objects[o] << " " << a[o] << " " << b[o] << "\n";
      }
      std::cout << "quasi-isomorphism in window: " << (r.ok() ? "yes" : "no") << "\n";
      if (!c_.out.empty()) io::write_text_file(c_.out, io::dump(twc_to_json(r.x, ref_for_output(c_.file, ""))));
      return r.ok() ? ok : verification;
    }
    auto tr = resolve(m, c_.window);
    for (auto& st : tr.steps) {
      std::cout << "step " << st.n << ": " << st.objects.size() << " generators";
      for (auto& v : st.verdicts)
        if (!v.ok) std::cout << ", H^" << v.degree << (v.expect_iso ? " not iso" : " not epi");
      std::cout << "\n";
    }
    std::cout << "verdicts: " << (tr.ok() ? "all hold" : "failures") << "\n";
    if (!c_.trace.empty()) io::write_text_file(c_.trace, trace_text(tr));
    if (!c_.out.empty()) io::write_text_file(c_.out, io::dump(twc_to_json(tr.x, ref_for_output(c_.file, ""))));
    return tr.ok() ? ok : verification;
  }

  int verify() {
    NamedCategories<F> cats;
    if (c_.categories.empty())
      cats = builtin_categories(k_);
    else
      for (auto& p : c_.categories) {
        auto q = category_file(p);
        require_valid(q);
        cats.emplace_back(std::filesystem::path(p).stem().string(), q);
      }
    std::vector<TwistedComplex<F>> extra;
    for (auto& p : c_.inputs) extra.push_back(twisted_file(p));
    // explicit inputs replace the random samples
    auto n = extra.empty() ? c_.samples : 0;
    auto rand_cats = extra.empty() ? cats : NamedCategories<F>{};
    SuiteReport rep;
    const auto& s = c_.suite;
    if (s == "quasi-ff")
      rep = quasi_ff_suite(cats, c_.samples, c_.seed);
    else if (s == "truncation")
      rep = truncation_suite(rand_cats, n, c_.seed, extra);
    else if (s == "hocolim")
      rep = hocolim_suite(rand_cats, n, n, c_.seed, extra);
    else if (s == "comparison")
      rep = comparison_suite(cats, c_.samples, c_.seed);
    else if (s == "heart")
      rep = heart_suite(cats, c_.samples, c_.seed);
    else if (s == "derived-proj")
      rep = derived_projective_suite(cats, c_.samples, c_.seed);
    else
      throw FormatError("unknown suite '" + s + "'");
    std::cout << "field " << k_.spec().name() << "\n" << rep.text();
    if (rep.hypothesis_failure) return hypothesis;
    return rep.ok() ? ok : verification;
  }
};

int dispatch(const Config& c) {
  auto spec = choose_field(c);
  if (spec.kind == FieldKind::rational) return Runner<RationalField>(RationalField{}, c).run();
  return Runner<PrimeField>(PrimeField(spec.p), c).run();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dgkit: twisted complexes and derived-projective resolutions over exact fields"};
  app.require_subcommand(1);
  app.fallthrough();
  Config c;
  app.add_option("--field", c.field, "coefficient field, Q or F_p (overrides files and DGKIT_FIELD)");

  auto add_out = [&](CLI::App* sub) { sub->add_option("-o,--out", c.out, "output file (default stdout)"); };
  auto add_cat = [&](CLI::App* sub) { sub->add_option("--category", c.categories, "category file overriding the one named in the input"); };

  for (auto name : {"validate", "h0", "hlc"}) {
    auto sub = app.add_subcommand(name);
    sub->add_option("file", c.file)->required()->check(CLI::ExistingFile);
  }
  {
    auto sub = app.add_subcommand("cohomology", "object-wise cohomology of a .dgm or Tot of a .twc");
    sub->add_option("file", c.file)->required()->check(CLI::ExistingFile);
    sub->add_option("--range", c.range, "degrees a..b");
    add_cat(sub);
  }
  {
    auto sub = app.add_subcommand("tot", "totalization as a .dgm");
    sub->add_option("file", c.file)->required()->check(CLI::ExistingFile);
    add_out(sub);
    add_cat(sub);
  }
  for (auto name : {"cone", "reduce-onesided"}) {
    auto sub = app.add_subcommand(name);
    sub->add_option("file", c.file)->required()->check(CLI::ExistingFile);
    sub->add_option("map", c.file2)->required()->check(CLI::ExistingFile);
    add_out(sub);
    add_cat(sub);
    if (std::string(name) == "reduce-onesided") sub->add_option("--alpha", c.alpha_out, "write the homotopy alpha here");
  }
  {
    auto sub = app.add_subcommand("truncate", "stupid truncation sigma_{>=n}");
    sub->add_option("file", c.file)->required()->check(CLI::ExistingFile);
    sub->add_option("--at", c.at)->required();
    add_out(sub);
    add_cat(sub);
  }
  for (auto name : {"resolve", "reconstruct"}) {
    auto sub = app.add_subcommand(name);
    sub->add_option("category", c.file)->required()->check(CLI::ExistingFile);
    sub->add_option("module", c.file2)->required()->check(CLI::ExistingFile);
    sub->add_option("--window", c.window)->check(CLI::Range(0, 1000));
    if (std::string(name) == "resolve") sub->add_option("--trace", c.trace, "write the step trace here");
    add_out(sub);
  }
  {
    auto sub = app.add_subcommand("verify", "randomized verification suites");
    sub->add_option("suite", c.suite)->required()->check(CLI::IsMember({"quasi-ff", "truncation", "hocolim", "comparison", "heart", "derived-proj"}));
    sub->add_option("--samples", c.samples)->check(CLI::Range(1, 100000));
    sub->add_option("--seed", c.seed);
    sub->add_option("--input", c.inputs, "twisted complexes to check instead of random samples (truncation, hocolim)");
    add_cat(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return input;
  }
  for (auto* sub : app.get_subcommands()) c.command = sub->get_name();

  try {
    return dispatch(c);
  } catch (const HypothesisFailure& e) {
    std::cout << "hypothesis failure: " << e.what() << "\n";
    return hypothesis;
  } catch (const FormatError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return input;
  } catch (const Json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return input;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return input;
  }
}
