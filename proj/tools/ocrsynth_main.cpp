// ocrsynth_main.cpp - command-line entry point.

#include <iostream>

#include "ocrsynth/cli.hpp"

int main(int argc, char** argv) { return ocrsynth::run_cli(argc, argv, std::cout, std::cerr); }
