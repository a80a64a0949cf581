// Acceptance suite: runs every criterion and prints one pass/fail line each.
// Exits nonzero if any criterion fails.

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>

#include "tippetop/verify.hpp"

int main(int argc, char** argv) {
    std::uint64_t seed = 987654321ull;
    int jobs = 1;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--seed" && i + 1 < argc)
            seed = std::strtoull(argv[++i], nullptr, 10);
        else if (arg == "--jobs" && i + 1 < argc)
            jobs = std::atoi(argv[++i]);
    }
    const auto results = tippetop::verify::run_checks(true, seed, jobs);
    return tippetop::verify::print_table(std::cout, results) == 0 ? 0 : 1;
}
