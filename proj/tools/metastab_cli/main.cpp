#include "experiments.hpp"

int main(int argc, char** argv) { return metastab::cli::main_entry(argc, argv); }
