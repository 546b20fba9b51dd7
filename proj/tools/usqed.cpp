// usqed.cpp — Command-line front end

#include "usqed/cli.hpp"

int main(int argc, char** argv)
{
    return usqed::cli::main_entry(argc, argv);
}
