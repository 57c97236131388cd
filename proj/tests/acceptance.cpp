#include <iostream>

#include "ldfec/validation.hpp"

int main() {
    int failed = 0;
    for (const auto& check : ldfec::validation::acceptance_checks()) {
        ldfec::validation::CheckResult r;
        try {
            r = check.run();
        } catch (const std::exception& e) {
            r.id = check.id;
            r.title = check.title;
            r.detail = std::string("error: ") + e.what();
        }
        std::cout << ldfec::validation::format(r) << std::endl;
        failed += r.pass ? 0 : 1;
    }
    std::cout << (failed ? std::to_string(failed) + " of " : std::string("all ")) +
                     std::to_string(ldfec::validation::acceptance_checks().size()) + " criteria " +
                     (failed ? "failed" : "passed")
              << std::endl;
    return failed ? 1 : 0;
}
