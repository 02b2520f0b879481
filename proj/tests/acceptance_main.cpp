#include <cstdio>
#include <cstring>

#include "gf/acceptance.hpp"

int main(int argc, char** argv) {
    std::string only;
    int threads = 4;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) only = argv[++i];
        if (std::strcmp(argv[i], "--threads") == 0 && i + 1 < argc) threads = std::atoi(argv[++i]);
    }
    auto results = gf::run_acceptance(only, threads);
    int failed = 0;
    for (const auto& r : results)
        if (!r.pass) ++failed;
    std::printf("%zu criteria run, %d failed\n", results.size(), failed);
    return failed == 0 ? 0 : 1;
}
