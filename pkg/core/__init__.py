# fb/core/__init__.py
