// Acceptance runner: one PASS/FAIL line per criterion, with wall time and limit.
// The full report is written to acceptance_report.txt in the working directory.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>

#include "dgkit/suites.hpp"

using namespace dgkit;

namespace {

const std::string fixtures = DGKIT_FIXTURES;

template <class F>
NamedCategories<F> load(const F& k, std::initializer_list<const char*> names) {
  NamedCategories<F> out;
  for (auto n : names) out.emplace_back(n, share(dgc_from_json(io::read_json_file(fixtures + "/" + n + ".dgc"), k)));
  return out;
}

NamedCategories<RationalField> load_mutations(const RationalField& k) {
  NamedCategories<RationalField> out;
  std::vector<std::filesystem::path> files;
  for (auto& e : std::filesystem::directory_iterator(fixtures + "/mutations"))
    if (e.path().extension() == ".dgc") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (auto& p : files) out.emplace_back(p.stem().string(), share(dgc_from_json(io::read_json_file(p.string()), k)));
  return out;
}

struct Criterion {
  int id;
  std::string what;
  double limit;  // seconds, 0 = none
  std::function<std::vector<SuiteReport>()> run;
};

struct Outcome {
  bool ok = true;
  double seconds = 0;
  std::string text;
};

Outcome run(const Criterion& c) {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  try {
    for (auto& r : c.run()) {
      o.ok = o.ok && r.ok();
      o.text += r.text();
    }
  } catch (const std::exception& e) {
    o.ok = false;
    o.text += std::string("exception: ") + e.what() + "\n";
  }
  o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::uint64_t seed = argc > 1 ? std::stoull(argv[1]) : 20240601;
  RationalField qq;
  PrimeField fp(101);
  auto valid_q = load(qq, {"F1", "F2", "F4"});
  auto mutated = load_mutations(qq);
  auto cats = load(fp, {"F1", "F2", "F4"});
  auto f4 = cats[2].second;

  std::vector<Criterion> criteria = {
      {1, "axiom suite on shipped fixtures and mutations", 5, [&] { return std::vector{axiom_suite(valid_q, mutated)}; }},
      {2, "MC/cone/shift closure, 200 complexes per fixture", 60, [&] { return std::vector{closure_suite(cats, 200, seed)}; }},
      {3, "Tot(cone f) = cone(Tot f), 100 morphisms per fixture", 60, [&] { return std::vector{tot_cone_suite(cats, 100, seed)}; }},
      {4, "truncation stabilization, 100 complexes per fixture", 120, [&] { return std::vector{truncation_suite(cats, 100, seed)}; }},
      {5, "one-sided reduction on F4, 100 morphisms plus golden", 60, [&] { return std::vector{one_sided_suite(f4, "F4", 100, seed)}; }},
      {6, "quasi-fully-faithfulness, 50 pairs per fixture", 300, [&] { return std::vector{quasi_ff_suite(cats, 50, seed)}; }},
      {7, "resolution golden trace plus 10 modules per fixture", 300,
       [&] { return std::vector{resolution_suite(cats, 10, seed, 4, fixtures + "/F2-simple-W6.trace")}; }},
      {8, "reconstruction, 25 per fixture, comparison with 10 samples", 600, [&] { return std::vector{reconstruction_suite(cats, 25, 10, seed)}; }},
      {9, "hocolim: 50 truncation colimits, 50 split sequences", 120, [&] { return std::vector{hocolim_suite(cats, 50, 50, seed)}; }},
  };

  std::string report;
  bool all = true;
  std::vector<Outcome> first;
  for (auto& c : criteria) {
    auto o = run(c);
    bool pass = o.ok && (c.limit == 0 || o.seconds < c.limit);
    all = all && pass;
    std::printf("criterion %d: %s (%.1f s, limit %.0f s) %s\n", c.id, pass ? "PASS" : "FAIL", o.seconds, c.limit, c.what.c_str());
    if (o.ok && !pass) std::printf("  over the time limit\n");
    std::fflush(stdout);
    report += o.text;
    first.push_back(std::move(o));
  }

  // 10: second full run with the same seed must give the same report
  auto t0 = std::chrono::steady_clock::now();
  std::string again;
  for (auto& c : criteria) again += run(c).text;
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool det = again == report;
  all = all && det;
  std::printf("criterion 10: %s (%.1f s) determinism: second run of criteria 1-9 with seed %llu is byte-identical\n", det ? "PASS" : "FAIL", secs,
              static_cast<unsigned long long>(seed));

  io::write_text_file("acceptance_report.txt", report);
  return all ? 0 : 1;
}
