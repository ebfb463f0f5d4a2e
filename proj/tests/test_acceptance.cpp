#include <iostream>

#include "koehler/selftest.hpp"

int main() {
    int failures = koehler::run_acceptance(std::cout);
    if (failures) std::cout << failures << " criteria failed\n";
    return failures ? 1 : 0;
}
