import json
import os
from copy import deepcopy
from dataclasses import dataclass
from pathlib import Path
from dotenv import load_dotenv
import logging

from src.modcalc.claims import Guards

# Load environment variables from .env file
load_dotenv()

logger = logging.getLogger(__name__)

DEFAULT_CONFIG = {
    "runtime": {
        "threads": 1,
        "seed": 0,
        "record_timings": False
    },
    "guards": {
        "max_p": 13,
        "max_m": 6,
        "max_q": 177147,
        "max_power_bits": 16384,
        "max_exhaustive": 1000000
    },
    "output": {
        "claims_report": "reports/claims.json",
        "search_results": "reports/search.csv",
        "format": "csv"
    },
    "cache": {
        "directory": ".cache/dlog",
        "enabled": True
    },
    "log_distinct": {
        "budget": 1000000,
        "q": 177147
    }
}


@dataclass(frozen=True)
class RunConfig:
    threads: int
    seed: int
    guards: Guards
    claims_report: str
    search_results: str
    format: str
    record_timings: bool = False
    cache_directory: str = ".cache/dlog"
    cache_enabled: bool = True


class ConfigSetup:
    def __init__(self, config_path="config/config.json"):
        self.config_path = Path(config_path)
        self.config = self.load_config()

    def load_config(self):
        """Load existing configuration or create default."""
        if self.config_path.exists():
            with open(self.config_path, 'r', encoding='utf-8') as f:
                loaded = json.load(f)
            # missing sections fall back to defaults
            config = deepcopy(DEFAULT_CONFIG)
            for section, values in loaded.items():
                if isinstance(values, dict) and isinstance(config.get(section), dict):
                    config[section].update(values)
                else:
                    config[section] = values
            return config

        default_config = deepcopy(DEFAULT_CONFIG)
        self.config_path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.config_path, 'w', encoding='utf-8') as f:
            json.dump(default_config, f, indent=2)

        logger.info(f"Created default configuration at {self.config_path}")
        return default_config

    def threads(self):
        """Thread count: MODCALC_THREADS wins over the file."""
        return int(os.getenv('MODCALC_THREADS') or self.config['runtime'].get('threads', 1))

    def validate_config(self):
        """Validate the configuration settings."""
        errors = []

        try:
            if self.threads() < 1:
                errors.append("threads must be at least 1")
        except ValueError:
            errors.append("MODCALC_THREADS is not an integer")

        for key, value in self.config.get('guards', {}).items():
            if not isinstance(value, int) or value < 1:
                errors.append(f"guard {key} must be a positive integer")

        if self.config.get('output', {}).get('format') not in ('json', 'csv'):
            errors.append("output format must be json or csv")

        if self.config.get('log_distinct', {}).get('budget', 1) < 1:
            errors.append("log_distinct budget must be positive")

        return {
            'valid': len(errors) == 0,
            'errors': errors
        }

    def save_config(self):
        """Save configuration to file."""
        with open(self.config_path, 'w', encoding='utf-8') as f:
            json.dump(self.config, f, indent=2)

    def update_setting(self, section, key, value):
        """Update a specific configuration setting."""
        if section in self.config and isinstance(self.config[section], dict):
            self.config[section][key] = value
        else:
            self.config[section] = {key: value}

        self.save_config()
        logger.info(f"Updated configuration: {section}.{key} = {value}")

    def run_config(self, threads=None, seed=None, output=None, fmt=None, record_timings=None):
        """RunConfig from the file; explicit arguments (CLI flags) win."""
        runtime = self.config['runtime']
        guards = self.config['guards']
        out = self.config['output']
        seed = runtime['seed'] if seed is None else seed
        return RunConfig(
            threads=threads or self.threads(),
            seed=seed,
            guards=Guards(
                max_p=guards['max_p'],
                max_m=guards['max_m'],
                max_q=guards['max_q'],
                max_power_bits=guards['max_power_bits'],
                max_exhaustive=guards['max_exhaustive'],
                seed=seed,
                budget=self.config['log_distinct']['budget'],
            ),
            claims_report=output or out['claims_report'],
            search_results=output or out['search_results'],
            format=fmt or out['format'],
            record_timings=runtime.get('record_timings', False) if record_timings is None else record_timings,
            cache_directory=self.config['cache']['directory'],
            cache_enabled=self.config['cache']['enabled'],
        )


def bootstrap_default_config(config_path="config/config.json"):
    """Create (if needed) and validate the default configuration."""
    config = ConfigSetup(config_path)
    validation = config.validate_config()
    if validation['valid']:
        print(f"Configuration at {config.config_path} is valid.")
    else:
        print("\nConfiguration has errors:")
        for error in validation['errors']:
            print(f" - {error}")
    return validation


if __name__ == "__main__":
    bootstrap_default_config()
