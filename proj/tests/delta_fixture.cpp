// Writes eigenform JSON for Delta (eigenvalues tau(q), q <= N) to stdout.

#include <cstdlib>
#include <iostream>

#include "oracles.hpp"

int main(int argc, char** argv) {
    const long N = argc > 1 ? std::atol(argv[1]) : 1000;
    if (N < 2) {
        std::cerr << "usage: delta_fixture N\n";
        return 64;
    }
    std::cout << eiscong::io::eigenform_json(oracle::delta_eigenform(N)).dump(1) << "\n";
}
