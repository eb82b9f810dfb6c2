#pragma once
#include <string>
namespace mha { std::string pipeline_placeholder(); }
