// Regenerates the bundled demo scores under data/scores/.

#include <fstream>
#include <iostream>

#include "demo_scores.hpp"

int main(int argc, char** argv) {
    const std::string dir = argc > 1 ? argv[1] : "data/scores";
    for (const auto& [name, bytes] : demo_scores::all()) {
        const std::string path = dir + "/" + name + ".mid";
        std::ofstream out(path, std::ios::binary);
        if (!out) {
            std::cerr << "cannot open " << path << "\n";
            return 1;
        }
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
        std::cout << path << " (" << bytes.size() << " bytes)\n";
    }
    return 0;
}
