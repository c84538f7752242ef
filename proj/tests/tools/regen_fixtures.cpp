// Writes the seeded fixture corpus to the directory given on the command line.
#include <filesystem>
#include <fstream>
#include <iostream>

#include "fixture_corpus.hpp"

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: regen_fixtures <dir>\n";
        return 1;
    }
    const std::filesystem::path dir = argv[1];
    std::filesystem::create_directories(dir);
    for (int i = 0; i < oracle::kCorpusSize; ++i) {
        const auto bytes = oracle::encode_p6(oracle::corpus_image(i));
        std::ofstream(dir / oracle::fixture_name(i), std::ios::binary)
            .write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    }
    std::cout << "wrote " << oracle::kCorpusSize << " images to " << dir << "\n";
}
