# Tests for formnet
