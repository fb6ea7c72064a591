#include <cstdlib>
#include <iostream>
#include <string>

#include "kaclab/acceptance.hpp"

int main(int argc, char** argv)
{
    kaclab::AcceptanceOptions opt;
    if (const char* w = std::getenv("KACLAB_WORKERS"))
        opt.workers = std::stoi(w);
    for (int i = 1; i < argc; ++i)
        opt.only.push_back(std::stoi(argv[i]));
    bool pass = true;
    kaclab::run_acceptance(opt, [&](const kaclab::CriterionResult& r) {
        std::cout << kaclab::format_criterion(r) << std::endl;
        pass = pass && r.pass;
    });
    std::cout << (pass ? "acceptance: PASS" : "acceptance: FAIL") << std::endl;
    return pass ? 0 : 1;
}
