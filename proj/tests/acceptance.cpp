// Runs the ten acceptance criteria and prints one line per criterion.
#include "leafcomm/suite.hpp"

#include <cstdlib>
#include <iostream>

int main(int argc, char** argv) {
  leafcomm::SuiteOptions o;
  if (argc > 1) o.seed = std::strtoull(argv[1], nullptr, 10);
  leafcomm::SuiteReport rep = leafcomm::run_suite(o);
  for (const auto& r : rep.results) std::cout << leafcomm::criterion_line(r) << " [" << r.seconds << " s]\n";
  std::cout << (rep.passed() ? "all criteria passed" : "some criteria FAILED") << "\n";
  return rep.passed() ? 0 : 1;
}
