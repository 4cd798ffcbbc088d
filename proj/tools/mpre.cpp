#include "mpre/cli.hpp"

int main(int argc, char** argv) { return mpre::cli::run(argc, argv); }
