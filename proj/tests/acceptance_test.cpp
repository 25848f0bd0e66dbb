// Runs every acceptance criterion once and prints one line per criterion.
// Exit status is 0 iff all criteria pass.

#include <cstdio>
#include <cstdlib>
#include <string>

#include "nclift/acceptance.hpp"

int main(int argc, char** argv) {
  nclift::AcceptanceOptions opts;
  if (argc > 1) opts.seed = std::strtoull(argv[1], nullptr, 10);
  std::printf("acceptance seed=%llu modulus=%llu\n", static_cast<unsigned long long>(opts.seed),
              static_cast<unsigned long long>(opts.p.value()));
  const auto report = nclift::run_acceptance(opts, [](const nclift::CheckResult& c) {
    std::printf("%s (%.2fs)\n", c.line().c_str(), c.seconds);
    std::fflush(stdout);
  });
  std::size_t passed = 0;
  for (const auto& c : report.checks) passed += c.pass;
  std::printf("%zu/%zu criteria pass\n", passed, report.checks.size());
  return report.all_pass() && report.checks.size() == 9 ? 0 : 1;
}
