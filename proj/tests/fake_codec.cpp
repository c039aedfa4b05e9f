// Copyright 2026 The hrlab Authors
// SPDX-License-Identifier: Apache-2.0

// Stand-in external codec for tests. Decode repeats every latent pixel into a 2x2 image block;
// encode averages 2x2 blocks. A leading "fail" argument exits non-zero with a diagnostic, and
// "garbage" writes a malformed response.

#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <string>

#include "hrlab/tensor_file.hpp"

int main(int argc, char** argv) {
    int arg = 1;
    std::string behaviour = "ok";
    if (argc == 5) {
        behaviour = argv[arg++];
    }
    if (argc - arg != 3) {
        std::cerr << "usage: fake_codec [fail|garbage] decode|encode IN OUT\n";
        return 64;
    }
    const std::string mode = argv[arg];
    if (behaviour == "fail") {
        std::cerr << "fake codec refused " << mode << "\n";
        return 3;
    }
    if (behaviour == "garbage") {
        std::ofstream(argv[arg + 2]) << "not a tensor";
        return 0;
    }
    const hrlab::LatentGrid in = hrlab::read_grid(argv[arg + 1]);
    if (mode == "decode") {
        hrlab::LatentGrid out(in.channels(), in.height() * 2, in.width() * 2);
        for (int c = 0; c < in.channels(); ++c)
            for (int y = 0; y < out.height(); ++y)
                for (int x = 0; x < out.width(); ++x) out.at(c, y, x) = in.at(c, y / 2, x / 2);
        hrlab::write_grid(argv[arg + 2], out);
    } else if (mode == "encode") {
        hrlab::LatentGrid out(in.channels(), in.height() / 2, in.width() / 2);
        for (int c = 0; c < out.channels(); ++c)
            for (int y = 0; y < out.height(); ++y)
                for (int x = 0; x < out.width(); ++x)
                    out.at(c, y, x) = 0.25 * (in.at(c, 2 * y, 2 * x) + in.at(c, 2 * y + 1, 2 * x) +
                                              in.at(c, 2 * y, 2 * x + 1) + in.at(c, 2 * y + 1, 2 * x + 1));
        hrlab::write_grid(argv[arg + 2], out);
    } else {
        std::cerr << "unknown mode " << mode << "\n";
        return 64;
    }
    return 0;
}
