# Tests for fanofloer
