// Acceptance suite: one line per criterion, non-zero exit on any failure.
//
//   acceptance [--only 1,7d] [--exclude 4b] [--linear-only] [--tol 7a=0] [--seed N]

#include "harnack/acceptance.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

int main(int argc, char** argv) {
  CLI::App app{"acceptance suite"};
  harnack::AcceptanceOptions o;
  std::vector<std::string> only, exclude, tols;
  app.add_flag("--linear-only", o.linear_only, "heat-flow criteria only");
  app.add_option("--only", only, "criterion ids, comma separated");
  app.add_option("--exclude", exclude, "criterion ids to skip, comma separated");
  app.add_option("--tol", tols, "tolerance override ID=VALUE");
  app.add_option("--seed", o.seed, "seed of the random initial data");
  app.add_flag("--quiet", [&](std::int64_t) { o.log = nullptr; }, "no progress lines");
  o.log = &std::cerr;
  CLI11_PARSE(app, argc, argv);

  auto ids = [](const std::vector<std::string>& in) {
    std::set<std::string> out;
    for (const auto& s : in) {
      std::stringstream ss(s);
      for (std::string id; std::getline(ss, id, ',');) {
        if (!id.empty()) out.insert(id);
      }
    }
    return out;
  };
  o.only = ids(only);
  o.exclude = ids(exclude);
  for (const auto& t : tols) {
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      std::cerr << "--tol expects ID=VALUE, got '" << t << "'\n";
      return 2;
    }
    o.tolerance[t.substr(0, eq)] = std::stod(t.substr(eq + 1));
  }

  const auto summary = harnack::run_acceptance_suite(o);
  harnack::print_table(summary, std::cout);
  return summary.passed() ? 0 : 1;
}
