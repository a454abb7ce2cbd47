// Acceptance suite: one PASS/FAIL line per criterion; nonzero exit on failure.

#include <iostream>

#include "hsvol/acceptance.hpp"

int main()
{
    hsvol::AcceptanceOptions options;
    const auto results = hsvol::run_acceptance(options, &std::cout);
    int failed = 0;
    for (const auto& r : results) failed += !r.pass;
    std::cout << results.size() - failed << " of " << results.size() << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
