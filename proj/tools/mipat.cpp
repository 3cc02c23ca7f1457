#include "mipat/cli.hpp"

int main(int argc, char** argv) { return mipat::cli::run(argc, argv); }
