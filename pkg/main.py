"""formnet entry point: `python main.py <command> [flags]`."""

from dotenv import load_dotenv

from formnet.cli import app

# Load environment variables early (ambient settings only: log level, audit log)
load_dotenv()


if __name__ == "__main__":
    app()
