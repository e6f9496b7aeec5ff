#include "periodlab/cli/app.hpp"

int main(int argc, char** argv) {
    return periodlab::cli::run(argc, argv);
}
