#include "fgame/experiments.hpp"

int main(int argc, char** argv) { return fgame::cli_main(argc, argv); }
