from sqlalchemy import Boolean, Column, DateTime, Float, Integer, String, Text
from sqlalchemy.orm import declarative_base
from datetime import datetime, timezone

Base = declarative_base()

class VerificationRecord(Base):
    __tablename__ = "verification_history"

    id = Column(Integer, primary_key=True, index=True)
    timestamp = Column(DateTime, default=lambda: datetime.now(timezone.utc), index=True)
    weight = Column(Integer, index=True)
    label = Column(String)
    mode = Column(String)
    digits = Column(Integer)
    residual = Column(Float)
    passed = Column(Boolean, index=True)
    coefficients = Column(Text, default="[]")  # fitted Z/P tail as JSON terms
    detail = Column(String, default="")
