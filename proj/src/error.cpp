// error.cpp — Warning sink and number formatting

#include "usqed/error.hpp"

#include <cstdio>
#include <iostream>

namespace usqed {

void warn(const std::string& message)
{
    std::cerr << "[usqed] warning: " << message << '\n';
}

std::string format_double(double value)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12e", value);
    return buf;
}

} // namespace usqed
