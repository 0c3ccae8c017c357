// Writes the quintic reduction scheme and synthetic leaf tables for the CLI tests:
//   make_quintic_fixture <dir> <gw|pairs> <seed>
// produces <dir>/quintic.json and <dir>/leaves/*.json.

#include "gwp/glue.hpp"
#include "gwp/io.hpp"

#include <filesystem>
#include <iostream>
#include <string>

int main(int argc, char** argv) {
    if (argc != 4) {
        std::cerr << "usage: make_quintic_fixture <dir> <gw|pairs> <seed>\n";
        return 2;
    }
    const std::filesystem::path dir = argv[1];
    const gwp::Side side = gwp::parse_side(argv[2]);
    const auto seed = static_cast<unsigned>(std::stoul(argv[3]));
    std::filesystem::create_directories(dir / "leaves");
    gwp::io::write_file(dir / "quintic.json", gwp::io::pipeline_to_json(gwp::quintic_scheme(side)));
    int k = 0;
    for (const auto& [name, table] : gwp::synthetic_quintic_leaves(side, seed)) {
        auto j = gwp::io::table_to_json(table);
        j["name"] = name;
        gwp::io::write_file(dir / "leaves" / ("leaf" + std::to_string(k++) + ".json"), j);
    }
    return 0;
}
