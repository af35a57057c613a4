// Regenerates the shipped PLC variant networks:
//   ftbn_gen_variants <models-dir>
// writes plc_noisy.json and plc_seqdep.json compiled from the PLC tree with
// the five-decimal 4e5 h component probabilities.

#include <fstream>
#include <iostream>

#include "ftbn/compiler.hpp"
#include "ftbn/plc_variants.hpp"

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: ftbn_gen_variants <models-dir>\n";
        return 1;
    }
    const std::string dir = argv[1];
    const ftbn::FaultTree ft = ftbn::plc_case_study_rounded_priors();
    const auto priors = ftbn::probability_table(ft.primaries, ftbn::MissionTime(4e5));
    const ftbn::BayesianNetwork plc = ftbn::compile(ft, priors).bn;

    std::ofstream(dir + "/plc_noisy.json") << ftbn::to_json(ftbn::plc_noisy_variant(plc));
    std::ofstream(dir + "/plc_seqdep.json") << ftbn::to_json(ftbn::plc_sequential_dependency_variant(plc));
    return 0;
}
