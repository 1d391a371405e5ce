#pragma once

#include <optional>
#include <string_view>

namespace assistlab {

enum class TaskMode { Locate, Select, Follow };

std::string_view to_string(TaskMode mode);
std::optional<TaskMode> parse_task_mode(std::string_view name);

}  // namespace assistlab
