// Writes the equation coverage table to the given path (stdout if none).
#include <fstream>
#include <iostream>

#include "dlindblad/equation_index.hpp"

int main(int argc, char** argv) {
    const std::string md = dlindblad::equation_index_markdown();
    if (argc < 2) {
        std::cout << md;
        return 0;
    }
    std::ofstream out(argv[1], std::ios::binary);
    if (!out) {
        std::cerr << "cannot open " << argv[1] << "\n";
        return 1;
    }
    out << md;
    return out ? 0 : 1;
}
