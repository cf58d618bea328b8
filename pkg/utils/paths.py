#!/usr/bin/env python3
"""
Path utilities for the Cayley toolkit
Resolves config and report-history locations for the current OS
"""

import os
import platform
from pathlib import Path

from utils.constants import APP_NAME, DEFAULT_DB_NAME


def get_project_dir():
    """Get the project root directory"""
    return Path(__file__).parent.parent


def get_user_data_dir():
    """Get the appropriate user data directory for the current OS"""
    system = platform.system()

    if system == "Windows":
        # Windows: %APPDATA%\CayleyToolkit
        base_dir = os.environ.get('APPDATA', '')
        if not base_dir:
            base_dir = Path.home() / "AppData" / "Roaming"
        return Path(base_dir) / APP_NAME

    elif system == "Darwin":  # macOS
        return Path.home() / "Library" / "Application Support" / APP_NAME

    else:  # Linux and others
        # Linux: ~/.local/share/CayleyToolkit (XDG standard)
        base_dir = os.environ.get('XDG_DATA_HOME', '')
        if not base_dir:
            base_dir = Path.home() / ".local" / "share"
        return Path(base_dir) / APP_NAME


def get_config_dir():
    """Get the appropriate config directory for the current OS"""
    system = platform.system()

    if system == "Windows":
        return get_user_data_dir()

    elif system == "Darwin":
        return Path.home() / "Library" / "Preferences" / APP_NAME

    else:
        base_dir = os.environ.get('XDG_CONFIG_HOME', '')
        if not base_dir:
            base_dir = Path.home() / ".config"
        return Path(base_dir) / APP_NAME


def get_config_file_path():
    """Get the path to the configuration file"""
    return get_config_dir() / "config.json"


def get_database_path():
    """Get the full path to the report history database, creating its directory"""
    data_dir = get_user_data_dir()
    data_dir.mkdir(parents=True, exist_ok=True)
    return data_dir / DEFAULT_DB_NAME


def get_runtime_info():
    """Get information about the current runtime environment"""
    return {
        'project_dir': str(get_project_dir()),
        'user_data_dir': str(get_user_data_dir()),
        'config_file': str(get_config_file_path()),
        'platform': platform.system(),
    }
