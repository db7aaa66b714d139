#include <iostream>

#include "parlab/labcli/lab.hpp"

int main(int argc, char** argv) { return parlab::lab::lab_main(argc, argv, std::cout, std::cerr); }
