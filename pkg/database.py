from functools import lru_cache
from typing import Optional
from sqlalchemy import create_engine
from sqlalchemy.orm import sessionmaker
from models import Base
import config


@lru_cache(maxsize=None)
def _factory(url: str) -> sessionmaker:
    connect_args = {"check_same_thread": False} if url.startswith("sqlite") else {}
    engine = create_engine(url, connect_args=connect_args)

    # create tables if not exist
    Base.metadata.create_all(bind=engine)

    return sessionmaker(autocommit=False, autoflush=False, bind=engine)


def session_factory(url: Optional[str] = None) -> sessionmaker:
    """Session maker for the verification ledger; defaults to DZV_DATABASE_URL."""
    return _factory(url or config.DATABASE_URL)
