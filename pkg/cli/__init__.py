# fb/cli/__init__.py
