#pragma once
#include <string>
namespace mha { std::string model_io_placeholder(); }
