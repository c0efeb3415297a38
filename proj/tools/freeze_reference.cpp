// Regenerates the frozen ED reference data used by the heis7 fixture.
//
//   freeze_reference <output_dir>

#include <filesystem>
#include <iostream>

#include "qspec/validation.hpp"

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: freeze_reference <output_dir>\n";
        return 2;
    }
    const std::filesystem::path dir(argv[1]);
    std::filesystem::create_directories(dir);
    const auto transitions = qspec::heis7_reference_transitions();
    qspec::write_reference_csv(dir / "heis7_transitions.csv", transitions);
    std::cout << "wrote " << transitions.size() << " transitions to " << (dir / "heis7_transitions.csv").string() << '\n';
    return 0;
}
