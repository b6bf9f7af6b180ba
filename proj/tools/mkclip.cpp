// Synthetic clip generator. The detail clips plant +v/-v spike pairs inside
// single down-sampling cells, so the base layer stays flat and the residual
// super-frame is exactly the planted spikes -- handy for controlled codec
// experiments at known sparsity.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cssr/errors.hpp"
#include "cssr/frame_io.hpp"
#include "cssr/synth.hpp"

namespace {

cssr::DetailBand parse_band(const std::string& text) {
    cssr::DetailBand band;
    if (std::sscanf(text.c_str(), "%d:%d:%d", &band.pairs, &band.min_mag, &band.max_mag) != 3)
        throw cssr::ParameterError("band '" + text + "' is not of the form pairs:min:max");
    return band;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cssr-mkclip: deterministic synthetic test clips"};

    std::string output;
    std::string mode = "detail";
    int width = 64, height = 64, frames = 3, scale = 2, level = 128;
    std::uint64_t seed = 7;
    std::vector<std::string> band_specs;

    app.add_option("--output", output, "output .y4m path")->required();
    app.add_option("--mode", mode, "detail, static (frozen frame 0) or const")
        ->check(CLI::IsMember({"detail", "static", "const"}))
        ->capture_default_str();
    app.add_option("--width", width, "frame width")->capture_default_str();
    app.add_option("--height", height, "frame height")->capture_default_str();
    app.add_option("--frames", frames, "frame count")->capture_default_str();
    app.add_option("--scale", scale, "down-sampling factor the clip is built for")
        ->capture_default_str();
    app.add_option("--seed", seed, "placement seed")->capture_default_str();
    app.add_option("--level", level, "luma level for const mode")->capture_default_str();
    app.add_option("--band", band_specs,
                   "spike band as pairs:min:max (repeatable), e.g. --band 5:15:44")
        ->take_all();

    CLI11_PARSE(app, argc, argv);

    try {
        cssr::VideoSequence video;
        if (mode == "const") {
            if (level < 0 || level > 255) throw cssr::ParameterError("--level must be in [0, 255]");
            video = cssr::constant_clip(width, height, frames, static_cast<std::uint8_t>(level));
        } else {
            std::vector<cssr::DetailBand> bands;
            bands.reserve(band_specs.size());
            for (const std::string& spec : band_specs) bands.push_back(parse_band(spec));
            if (bands.empty()) bands.push_back({6, 15, 44});
            video = cssr::detail_clip(width, height, frames, scale, bands, seed, mode == "static");
        }
        cssr::write_y4m_file(video, output);
    } catch (const cssr::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
