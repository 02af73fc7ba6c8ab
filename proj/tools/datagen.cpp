// Regenerates the bundled synthetic series under data/. The generators are
// seed-pinned, so rerunning reproduces the committed files byte for byte.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "tsf/synth.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Write the bundled synthetic series as Yahoo-layout CSV files"};
    std::string out_dir = "data";
    app.add_option("--out-dir", out_dir, "Target directory (must exist)")->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    try {
        for (const tsf::BundledSeries& spec : tsf::bundled_series()) {
            const tsf::SeriesFrame frame = tsf::make_synth_series(spec.kind, spec.seed, spec.n);
            const std::string path = out_dir + "/" + spec.name + ".csv";
            tsf::write_series_csv(frame, path);
            std::cout << path << ": " << frame.size() << " rows\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "datagen: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
